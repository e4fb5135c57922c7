use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.  Always in lowest terms with positive denominator;
/// `num_rational` maintains both invariants on every operation.
pub type Scalar = num_rational::BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Scalar::from_integer(acc)
}

/// Renders a scalar as `p` or `p/q`, matching the on-disk model format.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `p` or `p/q`.  The denominator must be nonzero.
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|e| format!("bad numerator `{num}`: {e}"))?;
    let d: BigInt = den
        .parse()
        .map_err(|e| format!("bad denominator `{den}`: {e}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    let mut s = Scalar::new(n, d);
    if s.denom().is_negative() {
        s = -s;
    }
    Ok(s)
}

/// Sorted sparse vector sum `a + c·b`.  Inputs and output are sorted by index
/// and free of explicit zeros.
pub fn sv_add_scaled(
    a: &[(usize, Scalar)],
    b: &[(usize, Scalar)],
    c: &Scalar,
) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ia, va)), Some((ib, vb))) if ia == ib => {
                let v = va + vb * c;
                if !v.is_zero() {
                    out.push((*ia, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ia, va)), Some((ib, _))) if ia < ib => {
                out.push((*ia, va.clone()));
                i += 1;
            }
            (Some(_), Some((ib, vb))) => {
                let v = vb * c;
                if !v.is_zero() {
                    out.push((*ib, v));
                }
                j += 1;
            }
            (Some((ia, va)), None) => {
                out.push((*ia, va.clone()));
                i += 1;
            }
            (None, Some((ib, vb))) => {
                let v = vb * c;
                if !v.is_zero() {
                    out.push((*ib, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub fn sv_scale(a: &[(usize, Scalar)], c: &Scalar) -> Vec<(usize, Scalar)> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "3/4", "-7/2"] {
            let v = parse_scalar(s).unwrap();
            assert_eq!(format_scalar(&v), s);
        }
        // reduced on parse
        assert_eq!(format_scalar(&parse_scalar("6/4").unwrap()), "3/2");
        assert_eq!(format_scalar(&parse_scalar("2/-4").unwrap()), "-1/2");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
    }

    #[test]
    fn sparse_add_cancels() {
        let a = vec![(0, int(1)), (2, int(2))];
        let b = vec![(0, int(1)), (1, int(3))];
        let s = sv_add_scaled(&a, &b, &int(-1));
        assert_eq!(s, vec![(1, int(-3)), (2, int(2))]);
    }
}
