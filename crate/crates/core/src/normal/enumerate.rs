//! Extreme rays of `{x >= 0 : A x = 0}` by incremental hyperplane
//! intersection (double description) in exact integer arithmetic.
//!
//! Starting from the unit rays of the nonnegative orthant, each equation is
//! intersected in turn: rays on the hyperplane survive, and every adjacent
//! pair with opposite signs contributes one new ray. Two rays are adjacent
//! when no third ray has support inside the union of their supports.
//!
//! Supports only grow under combination (all coordinates are nonnegative),
//! so a pair whose combined support is inadmissible can be skipped without
//! changing the admissible rays of the final cone, nor the adjacency tests
//! among admissible pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{matching_equations, support_admissible, CoordMode, NormalCoordinateVector, NormalError};
use crate::triangulation::Triangulation;

pub const DEFAULT_RAY_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Maximum number of rays alive after any intersection step.
    pub ray_cap: usize,
    /// Skip pairs whose combined support is already inadmissible.
    pub prune: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            ray_cap: DEFAULT_RAY_CAP,
            prune: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support(Vec<u64>);

impl Support {
    fn empty(dim: usize) -> Self {
        Support(vec![0; dim.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn union(&self, other: &Support) -> Support {
        Support(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    fn is_subset(&self, other: &Support) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    coords: Vec<BigInt>,
    support: Support,
}

impl Ray {
    fn from_coords(coords: Vec<BigInt>) -> Ray {
        let mut support = Support::empty(coords.len());
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                support.set(i);
            }
        }
        Ray { coords, support }
    }
}

/// Primitive integer generators of the extreme rays of
/// `{x >= 0 : equations · x = 0}` whose support satisfies `admissible`.
/// `admissible` must be closed under taking subsets of the support.
pub fn extreme_rays(
    equations: &[Vec<i64>],
    dim: usize,
    admissible: &dyn Fn(&Support) -> bool,
    prune: bool,
    ray_cap: usize,
) -> Result<Vec<Vec<BigInt>>, NormalError> {
    let mut rays: Vec<Ray> = (0..dim)
        .map(|i| {
            let mut c = vec![BigInt::zero(); dim];
            c[i] = BigInt::one();
            Ray::from_coords(c)
        })
        .filter(|r| !prune || admissible(&r.support))
        .collect();

    let live: Vec<&Vec<i64>> = equations.iter().filter(|r| r.iter().any(|&a| a != 0)).collect();
    for (step, row) in live.iter().enumerate() {
        let values: Vec<BigInt> = rays
            .iter()
            .map(|r| {
                r.coords
                    .iter()
                    .zip(row.iter())
                    .filter(|(_, &a)| a != 0)
                    .map(|(x, &a)| x * a)
                    .sum()
            })
            .collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut next: Vec<Ray> = Vec::new();
        for &i in &pos {
            for &j in &neg {
                let joint = rays[i].support.union(&rays[j].support);
                if prune && !admissible(&joint) {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == i || k == j || !r.support.is_subset(&joint));
                if !adjacent {
                    continue;
                }
                let a = -&values[j];
                let b = &values[i];
                let coords: Vec<BigInt> = rays[i]
                    .coords
                    .iter()
                    .zip(&rays[j].coords)
                    .map(|(x, y)| &a * x + b * y)
                    .collect();
                next.push(Ray {
                    coords: primitive(coords),
                    support: joint,
                });
            }
        }
        let survivors = rays
            .into_iter()
            .zip(values.iter())
            .filter(|(_, v)| v.is_zero())
            .map(|(r, _)| r);
        rays = survivors.chain(next).collect();
        if rays.len() > ray_cap {
            return Err(NormalError::ResourceLimit {
                cap: ray_cap,
                rays: rays.len(),
                processed: step + 1,
                total: live.len(),
            });
        }
    }

    let mut out: Vec<Vec<BigInt>> = rays
        .into_iter()
        .filter(|r| admissible(&r.support))
        .map(|r| r.coords)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Admissible vertex solutions of the matching equations, scaled to
/// primitive integer vectors and sorted. In octagonal coordinates only
/// vectors with exactly one octagon are returned.
pub fn enumerate_vertex_surfaces(
    tri: &Triangulation,
    mode: CoordMode,
) -> Result<Vec<NormalCoordinateVector>, NormalError> {
    enumerate_vertex_surfaces_with(tri, mode, &EnumerationOptions::default())
}

pub fn enumerate_vertex_surfaces_with(
    tri: &Triangulation,
    mode: CoordMode,
    options: &EnumerationOptions,
) -> Result<Vec<NormalCoordinateVector>, NormalError> {
    let tets = tri.tet_count();
    let dim = mode.block() * tets;
    let equations = matching_equations(tri, mode);
    let admissible = |s: &Support| support_admissible(mode, |i| s.contains(i), tets);
    let rays = extreme_rays(&equations, dim, &admissible, options.prune, options.ray_cap)?;

    let mut out = Vec::with_capacity(rays.len());
    for ray in rays {
        let coords = ray
            .iter()
            .map(|x| x.to_u64().ok_or(NormalError::Overflow))
            .collect::<Result<Vec<u64>, _>>()?;
        let v = NormalCoordinateVector::new(mode, coords);
        if mode == CoordMode::Octagonal && v.octagon_total() != 1 {
            continue;
        }
        out.push(v);
    }
    out.sort();
    Ok(out)
}
