//! Exact dyadic arithmetic for analytic witnesses.

use num_rational::Ratio;

pub type Q = Ratio<i128>;

/// Largest power-of-two denominator accepted as "exactly dyadic".
const MAX_DYADIC_BITS: u32 = 40;

/// `v` as `m / 2^k` with `k ≤ 40`, if exact.
pub fn dyadic(v: f64) -> Option<Q> {
    if !v.is_finite() {
        return None;
    }
    let mut scaled = v;
    for k in 0..=MAX_DYADIC_BITS {
        if scaled.fract() == 0.0 && scaled.abs() < 2f64.powi(100) {
            return Some(Q::new(scaled as i128, 1i128 << k));
        }
        scaled *= 2.0;
    }
    None
}

/// Every entry exactly dyadic, or `None`.
pub fn all_dyadic(vs: &[f64]) -> Option<Vec<Q>> {
    vs.iter().map(|&v| dyadic(v)).collect()
}

pub fn to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// `"num/den"`, or just `"num"` for integers.
pub fn format(q: &Q) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"num/den"` or an integer.
pub fn parse(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i128 = a.trim().parse().ok()?;
            let d: i128 = b.trim().parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => s.trim().parse().ok().map(Q::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_detection() {
        assert_eq!(dyadic(0.5), Some(Q::new(1, 2)));
        assert_eq!(dyadic(-7.0 / 16.0), Some(Q::new(-7, 16)));
        assert_eq!(dyadic(3.0), Some(Q::from_integer(3)));
        assert_eq!(dyadic(1.0 / 3.0), None);
        assert_eq!(dyadic(f64::NAN), None);
    }

    #[test]
    fn round_trip() {
        let q = Q::new(32768, 51455);
        assert_eq!(parse(&format(&q)), Some(q));
        assert_eq!(format(&Q::from_integer(2)), "2");
        assert_eq!(parse("x/2"), None);
        assert_eq!(parse("1/0"), None);
    }
}
