//! Frequency argument parsing: `"r/s"` stays an exact tagged rational,
//! anything else is parsed as a decimal in `[0, 1)`.

use zaremba_core::ArcPoint;

pub fn parse_theta(input: &str) -> Result<ArcPoint, String> {
    let text = input.trim();
    if let Some((num, den)) = text.split_once('/') {
        let r: u64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in theta '{text}'"))?;
        let s: u64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in theta '{text}'"))?;
        return ArcPoint::rational(r, s).map_err(|e| e.to_string());
    }
    let value: f64 = text
        .parse()
        .map_err(|_| format!("theta '{text}' is neither r/s nor a decimal"))?;
    if !value.is_finite() {
        return Err(format!("theta '{text}' is not finite"));
    }
    Ok(ArcPoint::real(value))
}

/// Re-tag a parsed point with a major-arc offset.
pub fn with_beta(point: ArcPoint, beta: f64) -> Result<ArcPoint, String> {
    if beta == 0.0 {
        return Ok(point);
    }
    match point.rational {
        Some((r, s)) => ArcPoint::rational_offset(r, s, beta).map_err(|e| e.to_string()),
        None => Ok(ArcPoint::real(point.theta + beta)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_rationals() {
        let p = parse_theta("3/7").unwrap();
        assert_eq!(p.rational, Some((3, 7)));
        let p = parse_theta(" 6/4 ").unwrap();
        assert_eq!(p.rational, Some((1, 2)));
    }

    #[test]
    fn parses_decimals() {
        let p = parse_theta("0.25").unwrap();
        assert_eq!(p.rational, None);
        assert_eq!(p.theta, 0.25);
        // wrap into [0, 1)
        assert_eq!(parse_theta("1.25").unwrap().theta, 0.25);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_theta("abc").is_err());
        assert!(parse_theta("1/0").is_err());
        assert!(parse_theta("nan").is_err());
    }

    #[test]
    fn beta_offsets() {
        let p = with_beta(parse_theta("1/3").unwrap(), 1e-4).unwrap();
        assert_eq!(p.rational, Some((1, 3)));
        assert_eq!(p.beta, 1e-4);
        assert_eq!(p.theta, 1.0 / 3.0 + 1e-4);
    }
}
