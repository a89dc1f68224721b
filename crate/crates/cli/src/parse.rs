//! Textual inputs: comma-separated real vectors and JSON group-algebra elements.

use gck::Complex64;
use serde::Deserialize;

/// Parse `v1,v2,...` into finite reals. Whitespace around entries is ignored.
pub fn parse_vector(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Err("empty vector".into());
    }
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let v: f64 = part.parse().map_err(|_| format!("`{part}` is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{part}` is not finite"))
            }
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Real(f64),
    Pair([f64; 2]),
}

/// Parse a JSON array of coefficients, each a number or an `[re, im]` pair.
pub fn parse_element(s: &str) -> Result<Vec<Complex64>, String> {
    let raw: Vec<Coefficient> = serde_json::from_str(s).map_err(|e| format!("element: {e}"))?;
    let out: Vec<Complex64> = raw
        .into_iter()
        .map(|c| match c {
            Coefficient::Real(re) => Complex64::new(re, 0.0),
            Coefficient::Pair([re, im]) => Complex64::new(re, im),
        })
        .collect();
    if out.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err("element has non-finite coefficients".into());
    }
    Ok(out)
}
