//! Slopes on a torus, the Farey graph, and the action of integer matrices of
//! determinant ±1 on slopes.
//!
//! A slope is a primitive pair `(p, q)` up to sign, written `p/q`. Two slopes
//! span an edge of the Farey graph when `|p q' - q p'| = 1`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FareyError {
    #[error("({0}, {1}) is not a primitive pair")]
    NotPrimitive(i64, i64),
    #[error("invalid matrix {0}: determinant must be 1 or -1")]
    InvalidMatrix(String),
    #[error("cannot parse `{0}`: {1}")]
    Syntax(String, String),
    #[error("slope set is empty")]
    EmptySet,
    #[error("integer overflow in slope arithmetic")]
    Overflow,
}

/// An unoriented slope in normal form: `q > 0`, or `(p, q) = (1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };
    pub const ZERO: Slope = Slope { p: 0, q: 1 };

    /// Requires `gcd(p, q) = 1`.
    pub fn new(p: i64, q: i64) -> Result<Slope, FareyError> {
        if p.gcd(&q) != 1 {
            return Err(FareyError::NotPrimitive(p, q));
        }
        Ok(Self::normalized(p, q))
    }

    /// The slope of a nonzero homology class, dividing out any common factor.
    pub fn from_class(p: i64, q: i64) -> Option<Slope> {
        if p == 0 && q == 0 {
            return None;
        }
        let g = p.gcd(&q);
        Some(Self::normalized(p / g, q / g))
    }

    fn normalized(p: i64, q: i64) -> Slope {
        if q < 0 || (q == 0 && p < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    fn from_wide(p: i128, q: i128) -> Result<Slope, FareyError> {
        let p = i64::try_from(p).map_err(|_| FareyError::Overflow)?;
        let q = i64::try_from(q).map_err(|_| FareyError::Overflow)?;
        Slope::new(p, q)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = FareyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = |why: &str| FareyError::Syntax(s.to_string(), why.to_string());
        let (p, q) = s.trim().split_once('/').ok_or_else(|| syntax("expected p/q"))?;
        let p: i64 = p.trim().parse().map_err(|_| syntax("numerator is not an integer"))?;
        let q: i64 = q.trim().parse().map_err(|_| syntax("denominator is not an integer"))?;
        Slope::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Geometric intersection number `|p q' - q p'|`.
pub fn intersection_number(x: Slope, y: Slope) -> u128 {
    (x.p as i128 * y.q as i128 - x.q as i128 * y.p as i128).unsigned_abs()
}

/// An integer matrix `(a b; c d)` with determinant ±1, acting on slopes as
/// column vectors `(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GluingMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GluingMatrix {
    pub const IDENTITY: GluingMatrix = GluingMatrix { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, FareyError> {
        let m = GluingMatrix { a, b, c, d };
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det.abs() != 1 {
            return Err(FareyError::InvalidMatrix(m.to_string()));
        }
        Ok(m)
    }

    pub fn determinant(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> GluingMatrix {
        let det = self.determinant();
        GluingMatrix {
            a: det * self.d,
            b: -det * self.b,
            c: -det * self.c,
            d: det * self.a,
        }
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &GluingMatrix) -> Result<GluingMatrix, FareyError> {
        let m = |x: i64, y: i64, z: i64, w: i64| -> Result<i64, FareyError> {
            let v = x as i128 * y as i128 + z as i128 * w as i128;
            i64::try_from(v).map_err(|_| FareyError::Overflow)
        };
        Ok(GluingMatrix {
            a: m(self.a, other.a, self.b, other.c)?,
            b: m(self.a, other.b, self.b, other.d)?,
            c: m(self.c, other.a, self.d, other.c)?,
            d: m(self.c, other.b, self.d, other.d)?,
        })
    }

    /// `self^n`; negative powers use the inverse.
    pub fn pow(&self, n: i64) -> Result<GluingMatrix, FareyError> {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = GluingMatrix::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base)?;
            }
        }
        Ok(acc)
    }

    /// The Dehn twist about `s`: fixes `s`, has determinant 1, and is the
    /// conjugate of `(1 1; 0 1)` by any matrix carrying `1/0` to `s`.
    pub fn dehn_twist(s: Slope) -> Result<GluingMatrix, FareyError> {
        let (p, q) = (s.p as i128, s.q as i128);
        let conv = |v: i128| i64::try_from(v).map_err(|_| FareyError::Overflow);
        Ok(GluingMatrix {
            a: conv(1 - p * q)?,
            b: conv(p * p)?,
            c: conv(-q * q)?,
            d: conv(1 + p * q)?,
        })
    }

    /// A determinant-1 matrix sending `s` to `1/0`, built from the extended
    /// Euclidean algorithm.
    pub fn normalizing(s: Slope) -> GluingMatrix {
        // r, t with p t - q r = 1; then (p r; q t) sends 1/0 to s.
        let g = s.p.extended_gcd(&s.q);
        let (x, y) = if g.gcd < 0 { (-g.x, -g.y) } else { (g.x, g.y) };
        debug_assert_eq!(g.gcd.abs(), 1);
        let (t, r) = (x, -y);
        GluingMatrix {
            a: t,
            b: -r,
            c: -s.q,
            d: s.p,
        }
    }

    pub fn apply(&self, s: Slope) -> Result<Slope, FareyError> {
        let (p, q) = self.apply_wide(s.p as i128, s.q as i128);
        Slope::from_wide(p, q)
    }

    fn apply_wide(&self, p: i128, q: i128) -> (i128, i128) {
        (
            self.a as i128 * p + self.b as i128 * q,
            self.c as i128 * p + self.d as i128 * q,
        )
    }
}

impl fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for GluingMatrix {
    type Err = FareyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || FareyError::Syntax(s.to_string(), "expected a,b;c,d".to_string());
        let (top, bottom) = s.trim().split_once(';').ok_or_else(syntax)?;
        let (a, b) = top.split_once(',').ok_or_else(syntax)?;
        let (c, d) = bottom.split_once(',').ok_or_else(syntax)?;
        let n = |t: &str| t.trim().parse::<i64>().map_err(|_| syntax());
        GluingMatrix::new(n(a)?, n(b)?, n(c)?, n(d)?)
    }
}

impl Serialize for GluingMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GluingMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Distance in the Farey graph.
///
/// `x` is moved to `1/0` by a determinant-1 matrix; the distance from `1/0`
/// to `p/q` with `q >= 2` is one more than the distance from `1/0` to the
/// image of `p/q` under the map taking `floor(p/q)` or `ceil(p/q)` to `1/0`,
/// since the Farey edge between those two integers separates `1/0` from
/// `p/q`. The descent explores both pivots level by level.
pub fn distance(x: Slope, y: Slope) -> u32 {
    let m = GluingMatrix::normalizing(x);
    let (p, q) = m.apply_wide(y.p as i128, y.q as i128);
    let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
    match q {
        0 => 0,
        1 => 1,
        _ => descend_from_infinity(p, q),
    }
}

fn descend_from_infinity(p: i128, q: i128) -> u32 {
    let mut frontier = vec![(p, q)];
    let mut seen: HashSet<(i128, i128)> = HashSet::new();
    seen.insert((p, q));
    let mut depth = 1;
    loop {
        let mut next = Vec::new();
        for (p, q) in frontier {
            let r = p.rem_euclid(q);
            // floor pivot: -1/(y - floor y) = -q/r;  ceil pivot: q/(q - r).
            for child in [(-q, r), (q, q - r)] {
                if child.1 == 1 {
                    return depth + 1;
                }
                if seen.insert(child) {
                    next.push(child);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
}

/// Minimal distance between two slope sets, with a minimizing pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDistance {
    pub distance: u32,
    pub witness: (Slope, Slope),
}

/// Minimum over all pairs; ties go to the first pair in iteration order.
pub fn set_distance<'a, A, B>(a: A, b: B) -> Result<SetDistance, FareyError>
where
    A: IntoIterator<Item = &'a Slope>,
    B: IntoIterator<Item = &'a Slope> + Clone,
{
    let mut best: Option<SetDistance> = None;
    let mut saw_a = false;
    for &x in a {
        saw_a = true;
        for &y in b.clone() {
            let d = distance(x, y);
            if best.is_none_or(|s| d < s.distance) {
                best = Some(SetDistance {
                    distance: d,
                    witness: (x, y),
                });
            }
        }
    }
    if !saw_a {
        return Err(FareyError::EmptySet);
    }
    best.ok_or(FareyError::EmptySet)
}
