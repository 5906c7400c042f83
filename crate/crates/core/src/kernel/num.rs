//! Scalar and vector helpers over arbitrary-precision integers and rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> RatVec {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn to_rat(v: &[Int]) -> RatVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn zero_vec(m: usize) -> RatVec {
    vec![Rat::zero(); m]
}

pub fn unit(m: usize, i: usize) -> IntVec {
    let mut v = vec![Int::zero(); m];
    v[i] = Int::one();
    v
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let q: Int = q.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Rat::new(p, q)
        }
        None => Rat::from_integer(s.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?),
    };
    Ok(parsed)
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

/// Mixed product of an integer covector with a rational point.
pub fn dot_ir(a: &[Int], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + y * x)
}

pub fn add(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], c: &Rat) -> RatVec {
    a.iter().map(|x| x * c).collect()
}

pub fn neg_int(a: &[Int]) -> IntVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides an integer vector by the gcd of its entries (sign kept).
pub fn make_primitive_int(v: &[Int]) -> IntVec {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Positive rescaling of a rational vector to a primitive integer vector.
pub fn clear_denominators(v: &[Rat]) -> IntVec {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let ints: IntVec = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    make_primitive_int(&ints)
}

/// Unique integer vector with coprime entries on the ray spanned by `v`.
pub fn primitive(v: &[Rat]) -> Result<IntVec> {
    if is_zero(v) {
        return Err(Error::ZeroVector);
    }
    Ok(clear_denominators(v))
}

/// Extended gcd over a list: returns `(g, coeffs)` with `sum coeffs[i]*v[i] = g >= 0`.
pub fn ext_gcd_all(v: &[Int]) -> (Int, IntVec) {
    let mut g = Int::zero();
    let mut coeffs = vec![Int::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let e = g.extended_gcd(x);
        // e.gcd = e.x * g + e.y * x
        for c in coeffs.iter_mut().take(i) {
            *c *= &e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    (g, coeffs)
}

pub fn sign(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
