use num_complex::Complex64;

use super::{SweepError, SweepRow, SweepTable};

/// C `%.17g`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mant), exp.abs())
    } else {
        strip_zeros(&format!("{x:.prec$}", prec = (16 - exp) as usize)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// `param, re_E1, im_E1, ..., n_real` for eigenvalue sweeps, `param, value`
/// for Sturmian curves (empty where the curve is not real).
pub fn to_csv(table: &SweepTable) -> Result<String, SweepError> {
    let mut buf = Vec::new();
    {
        let mut w = writer(&mut buf);
        let sturmian = table.rows.iter().any(|r| r.sturmian.is_some()) || table.swept == super::Swept::EOnSturmian;
        if sturmian {
            w.write_record(["param", "value"])?;
            for row in &table.rows {
                w.write_record([fmt_g17(row.param), row.sturmian.map(fmt_g17).unwrap_or_default()])?;
            }
        } else {
            let mut header = vec!["param".to_string()];
            for k in 1..=table.n {
                header.push(format!("re_E{k}"));
                header.push(format!("im_E{k}"));
            }
            header.push("n_real".into());
            w.write_record(&header)?;
            for row in &table.rows {
                let mut rec = vec![fmt_g17(row.param)];
                for k in 0..table.n {
                    let z = row.eigenvalues.get(k).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                    rec.push(fmt_g17(z.re));
                    rec.push(fmt_g17(z.im));
                }
                rec.push(row.n_real.to_string());
                w.write_record(&rec)?;
            }
        }
        w.flush().map_err(|e| SweepError::Malformed(e.to_string()))?;
    }
    String::from_utf8(buf).map_err(|e| SweepError::Malformed(e.to_string()))
}

fn num(s: &str) -> Result<f64, SweepError> {
    s.parse::<f64>().map_err(|_| SweepError::Malformed(format!("bad number {s:?}")))
}

/// Rows back from [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, SweepError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let width = r.headers()?.len();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != width {
            return Err(SweepError::Malformed("ragged row".into()));
        }
        let param = num(&rec[0])?;
        if width == 2 {
            let v = if rec[1].is_empty() { None } else { Some(num(&rec[1])?) };
            rows.push(SweepRow { param, eigenvalues: Vec::new(), n_real: 0, sturmian: v, error: None });
            continue;
        }
        if width < 4 || width % 2 != 0 {
            return Err(SweepError::Malformed("unexpected column count".into()));
        }
        let n = (width - 2) / 2;
        let mut ev = Vec::with_capacity(n);
        for k in 0..n {
            ev.push(Complex64::new(num(&rec[1 + 2 * k])?, num(&rec[2 + 2 * k])?));
        }
        let n_real = rec[width - 1].parse().map_err(|_| SweepError::Malformed("bad n_real".into()))?;
        rows.push(SweepRow { param, eigenvalues: ev, n_real, sturmian: None, error: None });
    }
    Ok(rows)
}

/// Minimal gnuplot script for a CSV produced by [`to_csv`].
pub fn plot_script(table: &SweepTable, data_path: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key off\nset grid\n");
    if table.rows.iter().any(|r| r.sturmian.is_some()) || table.swept == super::Swept::EOnSturmian {
        s.push_str("set xlabel 'E'\nset ylabel 'curve'\n");
        s.push_str(&format!("plot '{data_path}' every ::1 using 1:2 with lines\n"));
        return s;
    }
    let axis = match table.swept {
        super::Swept::U => "u",
        _ => "r",
    };
    s.push_str(&format!("set xlabel '{axis}'\nset ylabel 'Re E'\n"));
    let parts: Vec<String> = (0..table.n)
        .map(|k| format!("'{data_path}' every ::1 using 1:{} with points pt 7 ps 0.3", 2 + 2 * k))
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_c() {
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-2.5), "-2.5");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(123456789.0), "123456789");
        assert_eq!(fmt_g17(0.0), "0");
        for x in [0.1, 1.0 / 3.0, -7.25e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }
}
