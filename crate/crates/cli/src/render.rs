//! Output values: exact wire form, exact text, and a floating rendering.
//! Floats are for reading only and never parsed back.

use serde_json::{json, Value};

use eqclass::series::TruncSeries;
use eqclass::wire::{CyclotomicWire, SeriesWire, YCoeffWire};
use eqclass::{Cyclotomic, YCoeff};

fn float(x: f64) -> String {
    // six decimals, trailing zeros dropped, no negative zero
    let s = format!("{:.6}", x + 0.0);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn approx_cyclotomic(c: &Cyclotomic) -> String {
    let (re, im) = c.embed_complex();
    let (re, im) = (float(re), float(im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

pub fn approx_ycoeff(y: &YCoeff) -> String {
    if y.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = y
        .terms()
        .map(|(k, c)| {
            let c = approx_cyclotomic(c);
            let c = if c.contains('i') && c.len() > 1 {
                format!("({c})")
            } else {
                c
            };
            match k {
                0 => c,
                1 => format!("{c}*y"),
                _ => format!("{c}*y^{k}"),
            }
        })
        .collect();
    let body = parts.join(" + ").replace("+ -", "- ");
    match y.denom_power() {
        0 => body,
        e => format!("({body})/(1+y)^{e}"),
    }
}

pub fn approx_series(s: &TruncSeries) -> String {
    if s.is_zero() {
        return "0".into();
    }
    let vars = s.ring().vars();
    let parts: Vec<String> = s
        .terms()
        .iter()
        .map(|(m, c)| {
            let mono: Vec<String> = m
                .iter()
                .zip(vars)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let c = approx_ycoeff(c);
            if mono.is_empty() {
                format!("[{c}]")
            } else {
                format!("[{c}]*{}", mono.join("*"))
            }
        })
        .collect();
    parts.join(" + ")
}

pub fn cyclotomic(c: &Cyclotomic) -> Value {
    let (re, im) = c.embed_complex();
    json!({
        "exact": CyclotomicWire::from(c),
        "text": c.to_string(),
        "approx": approx_cyclotomic(c),
        "re": re + 0.0,
        "im": im + 0.0,
    })
}

pub fn ycoeff(y: &YCoeff) -> Value {
    json!({
        "exact": YCoeffWire::from(y),
        "text": y.to_string(),
        "approx": approx_ycoeff(y),
    })
}

pub fn series(s: &TruncSeries) -> Value {
    json!({
        "exact": SeriesWire::with_ring(s),
        "text": s.to_string(),
        "approx": approx_series(s),
    })
}

/// Two-line human form of an exact value and its approximation.
pub fn pretty_pair(label: &str, exact: &str, approx: &str) -> Vec<String> {
    let mut out = vec![format!("{label}: {exact}")];
    if approx != exact {
        out.push(format!("{}  ≈ {approx}", " ".repeat(label.chars().count())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use eqclass::cyclo::rat;

    #[test]
    fn float_rendering() {
        assert_eq!(float(-0.0), "0");
        assert_eq!(float(0.5), "0.5");
        assert_eq!(float(-1e-9), "0");
        assert_eq!(approx_cyclotomic(&Cyclotomic::zeta(4, 1)), "1i");
        assert_eq!(approx_cyclotomic(&Cyclotomic::zeta(3, 1)), "-0.5+0.866025i");
        assert_eq!(approx_cyclotomic(&Cyclotomic::from_rational(rat(1, 3))), "0.333333");
    }

    #[test]
    fn ycoeff_rendering() {
        let y = &YCoeff::one() - &YCoeff::y();
        assert_eq!(approx_ycoeff(&y), "1 - 1*y");
        assert_eq!(approx_ycoeff(&YCoeff::one_plus_y_pow(-2)), "(1)/(1+y)^2");
        let v = ycoeff(&y);
        assert_eq!(v["text"], y.to_string());
    }
}
