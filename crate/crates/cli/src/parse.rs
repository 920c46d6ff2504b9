//! Complex literals of the form `a+bi` (no spaces), plus the keywords
//! `sqrt2`, `golden`, `i`, and `center` (the normalization point
//! (τ+σ)/2, resolved by the caller).

use ellgamma::{EgError, Complex64};

pub fn parse_complex(raw: &str, center: Option<Complex64>) -> Result<Complex64, EgError> {
    let s = raw.trim();
    match s {
        "sqrt2" => return Ok(Complex64::new(2f64.sqrt(), 0.0)),
        "golden" => return Ok(Complex64::new((1.0 + 5f64.sqrt()) / 2.0, 0.0)),
        "center" => {
            return center.ok_or_else(|| {
                EgError::domain("keyword 'center' needs both periods in context")
            })
        }
        "i" => return Ok(Complex64::new(0.0, 1.0)),
        "-i" => return Ok(Complex64::new(0.0, -1.0)),
        _ => {}
    }
    // pure real?
    if let Ok(re) = s.parse::<f64>() {
        return Ok(Complex64::new(re, 0.0));
    }
    // pure imaginary: "bi"
    if let Some(im_part) = s.strip_suffix('i') {
        if !im_part.contains(['+']) && !im_part[1..].contains('-') {
            if let Ok(im) = parse_coeff(im_part) {
                return Ok(Complex64::new(0.0, im));
            }
        }
    }
    // a+bi / a-bi: split at the sign that starts the imaginary part
    if let Some(body) = s.strip_suffix('i') {
        // scan from the right for a +/- that is not part of an exponent
        let bytes = body.as_bytes();
        for pos in (1..bytes.len()).rev() {
            let ch = bytes[pos] as char;
            if (ch == '+' || ch == '-') && bytes[pos - 1] as char != 'e' && bytes[pos - 1] as char != 'E'
            {
                let re_str = &body[..pos];
                let im_str = &body[pos..];
                if let (Ok(re), Ok(im)) = (re_str.parse::<f64>(), parse_coeff(im_str)) {
                    return Ok(Complex64::new(re, im));
                }
                break;
            }
        }
    }
    Err(EgError::domain(format!(
        "cannot parse complex literal '{raw}' (expected a+bi, bi, a, sqrt2, golden, or center)"
    )))
}

/// The coefficient of i: "", "+", "-", or a float with sign.
fn parse_coeff(s: &str) -> Result<f64, ()> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        other => other.parse::<f64>().map_err(|_| ()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Complex64 {
        parse_complex(s, None).unwrap()
    }

    #[test]
    fn literals() {
        assert_eq!(p("0.25"), Complex64::new(0.25, 0.0));
        assert_eq!(p("0.25+0.15i"), Complex64::new(0.25, 0.15));
        assert_eq!(p("-0.3-0.4i"), Complex64::new(-0.3, -0.4));
        assert_eq!(p("0.5i"), Complex64::new(0.0, 0.5));
        assert_eq!(p("-2i"), Complex64::new(0.0, -2.0));
        assert_eq!(p("i"), Complex64::new(0.0, 1.0));
        assert_eq!(p("1e-3+2e-4i"), Complex64::new(1e-3, 2e-4));
        assert_eq!(p("sqrt2"), Complex64::new(2f64.sqrt(), 0.0));
        assert!((p("golden").re - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn center_keyword() {
        let c = parse_complex("center", Some(Complex64::new(0.1, 0.4))).unwrap();
        assert_eq!(c, Complex64::new(0.1, 0.4));
        assert!(parse_complex("center", None).is_err());
    }

    #[test]
    fn garbage_rejected() {
        assert!(parse_complex("woof", None).is_err());
        assert!(parse_complex("1+2j", None).is_err());
    }
}
