//! Exact Fincke-Pohst enumeration of integer points in a rational ellipsoid
//! of any (small) dimension.
//!
//! The searches in this crate bound their regions by positive definite
//! quadratic forms built from twisted trace forms Tr(W x^2) with a totally
//! positive weight W taken from the field itself. That keeps the Gram
//! matrix, the center, and the radius exact rationals, so enumeration
//! completeness is an exact statement rather than a rounding argument.
//! Integer ranges per level come from exact integer square roots. Linear
//! constraints (fixed trace pairings) are folded in exactly by passing to
//! the hyperplane sublattice through a unimodular change of coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{ceil_minus_sqrt, floor_plus_sqrt};
use crate::error::Error;

/// An ellipsoid (b - center)^T gram (b - center) <= radius over Z^dim.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    pub gram: Vec<Vec<BigRational>>,
    pub center: Vec<BigRational>,
    pub radius: BigRational,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumStats {
    /// Candidate coordinates examined across all levels.
    pub nodes: u64,
    /// Points inside the ellipsoid that were passed to the visitor.
    pub points: u64,
    /// False when the visitor stopped the walk early.
    pub completed: bool,
}

struct Ldl {
    d: Vec<BigRational>,
    /// Unit lower-triangular factors l[j][i] for j > i.
    l: Vec<Vec<BigRational>>,
}

/// LDL^T decomposition of a positive definite rational matrix.
fn ldl(gram: &[Vec<BigRational>]) -> Result<Ldl, Error> {
    let n = gram.len();
    let mut d = vec![BigRational::zero(); n];
    let mut l = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut di = gram[i][i].clone();
        for k in 0..i {
            di -= &d[k] * &l[i][k] * &l[i][k];
        }
        if !di.is_positive() {
            return Err(Error::SelfCheckFailed(
                "enumeration form is not positive definite".into(),
            ));
        }
        for j in i + 1..n {
            let mut v = gram[j][i].clone();
            for k in 0..i {
                v -= &d[k] * &l[j][k] * &l[i][k];
            }
            l[j][i] = v / &di;
        }
        d[i] = di;
    }
    Ok(Ldl { d, l })
}

/// Walk every integer point of the ellipsoid in a fixed deterministic
/// order: outermost coordinate last index first, center-outward within
/// each level (nearest integer to the level center, then +1, -1, +2, ...).
/// The center-outward order makes early-exit witness searches hit the
/// well-interior region first. The visitor returns `false` to stop early.
/// `node_limit` bounds the nodes examined; exceeding it is an error so
/// that a partial walk can never be mistaken for a complete one.
pub fn enumerate_ellipsoid(
    e: &Ellipsoid,
    node_limit: u64,
    visit: &mut dyn FnMut(&[BigInt]) -> bool,
) -> Result<EnumStats, Error> {
    let n = e.gram.len();
    assert!(n > 0 && e.center.len() == n);
    let fac = ldl(&e.gram)?;
    let mut stats = EnumStats {
        completed: true,
        ..EnumStats::default()
    };
    if e.radius.is_negative() {
        return Ok(stats);
    }
    let mut x = vec![BigRational::zero(); n];
    let mut point = vec![BigInt::zero(); n];
    let done = walk(
        e,
        &fac,
        n - 1,
        &e.radius.clone(),
        &mut x,
        &mut point,
        node_limit,
        &mut stats,
        visit,
    )?;
    stats.completed = done;
    Ok(stats)
}

/// Recursive level walk. `remaining` is the radius left after the outer
/// levels; `x` holds b_j - m_j for fixed outer coordinates.
#[allow(clippy::too_many_arguments)]
fn walk(
    e: &Ellipsoid,
    fac: &Ldl,
    level: usize,
    remaining: &BigRational,
    x: &mut [BigRational],
    point: &mut [BigInt],
    node_limit: u64,
    stats: &mut EnumStats,
    visit: &mut dyn FnMut(&[BigInt]) -> bool,
) -> Result<bool, Error> {
    let n = e.gram.len();
    // y_level = x_level + sum_{j>level} l[j][level] x_j must satisfy
    // d_level * y^2 <= remaining.
    let mut shift = BigRational::zero();
    for j in level + 1..n {
        shift += &fac.l[j][level] * &x[j];
    }
    let c = &e.center[level] - &shift;
    let v = remaining / &fac.d[level];
    let lo = ceil_minus_sqrt(&c, &v);
    let hi = floor_plus_sqrt(&c, &v);
    if lo > hi {
        return Ok(true);
    }
    // center-outward: b*, b*+1, b*-1, b*+2, ...
    let bstar = {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut b = (&c + half).floor().to_integer();
        if b < lo {
            b = lo.clone();
        }
        if b > hi {
            b = hi.clone();
        }
        b
    };
    let mut up = bstar.clone();
    let mut down: BigInt = &bstar - 1;
    let mut take_up = true;
    loop {
        let b = if take_up && up <= hi {
            let b = up.clone();
            up += 1;
            b
        } else if down >= lo {
            let b = down.clone();
            down -= 1;
            b
        } else if up <= hi {
            let b = up.clone();
            up += 1;
            b
        } else {
            break;
        };
        take_up = !take_up;
        stats.nodes += 1;
        if stats.nodes > node_limit {
            return Err(Error::BudgetExceeded {
                nodes: stats.nodes,
                proven_bound: 0,
            });
        }
        x[level] = BigRational::from_integer(b.clone()) - &e.center[level];
        let y = &x[level] + &shift;
        let used = &fac.d[level] * &y * &y;
        if used <= *remaining {
            point[level] = b.clone();
            if level == 0 {
                stats.points += 1;
                if !visit(point) {
                    return Ok(false);
                }
            } else {
                let rem = remaining - used;
                if !walk(e, fac, level - 1, &rem, x, point, node_limit, stats, visit)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Collect all points (convenience for small enumerations and tests).
pub fn collect_points(e: &Ellipsoid, node_limit: u64) -> Result<Vec<Vec<BigInt>>, Error> {
    let mut out = Vec::new();
    enumerate_ellipsoid(e, node_limit, &mut |pt| {
        out.push(pt.to_vec());
        true
    })?;
    Ok(out)
}

/// Integer solutions of a . b = s as an affine sublattice: returns a
/// particular solution and dim-1 basis vectors of the null lattice,
/// obtained from a unimodular column transform; `None` when gcd(a) does
/// not divide s (no integer solutions). Requires a != 0.
pub fn hyperplane_lattice(a: &[BigInt], s: &BigInt) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let n = a.len();
    assert!(
        a.iter().any(|x| !x.is_zero()),
        "hyperplane needs a nonzero form"
    );
    // columns of u: integer lattice basis; invariant: a . u_col0 = r0,
    // a . u_colj = r[j]
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut r: Vec<BigInt> = a.to_vec();
    for j in 1..n {
        if r[j].is_zero() {
            continue;
        }
        let eg = r[0].extended_gcd(&r[j]);
        let (g, xc, yc) = (eg.gcd, eg.x, eg.y);
        let p = &r[0] / &g;
        let q = &r[j] / &g;
        // new col0 = xc*col0 + yc*colj ; new colj = -q*col0 + p*colj
        for i in 0..n {
            let c0 = u[i][0].clone();
            let cj = u[i][j].clone();
            u[i][0] = &xc * &c0 + &yc * &cj;
            u[i][j] = -&q * &c0 + &p * &cj;
        }
        r[0] = g;
        r[j] = BigInt::zero();
    }
    let g = r[0].clone();
    debug_assert!(!g.is_zero());
    let (quot, rem) = s.div_rem(&g);
    if !rem.is_zero() {
        return None;
    }
    let b0: Vec<BigInt> = (0..n).map(|i| &u[i][0] * &quot).collect();
    let null_basis: Vec<Vec<BigInt>> = (1..n)
        .map(|j| (0..n).map(|i| u[i][j].clone()).collect())
        .collect();
    debug_assert_eq!(a.iter().zip(&b0).map(|(x, y)| x * y).sum::<BigInt>(), *s);
    Some((b0, null_basis))
}

/// Restrict an ellipsoid to the affine sublattice b = b0 + V c: returns the
/// pulled-back ellipsoid over c in Z^{dim-1}, or `None` when the sublattice
/// misses the ellipsoid entirely.
pub fn restrict_to_sublattice(
    e: &Ellipsoid,
    b0: &[BigInt],
    null_basis: &[Vec<BigInt>],
) -> Option<Ellipsoid> {
    let n = e.gram.len();
    let m = null_basis.len();
    let rat = |x: &BigInt| BigRational::from_integer(x.clone());
    // d = b0 - center
    let d: Vec<BigRational> = (0..n).map(|i| rat(&b0[i]) - &e.center[i]).collect();
    let gv = |col: &[BigInt]| -> Vec<BigRational> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| &e.gram[i][j] * rat(&col[j]))
                    .sum::<BigRational>()
            })
            .collect()
    };
    let g_cols: Vec<Vec<BigRational>> = null_basis.iter().map(|col| gv(col)).collect();
    let mut gram = vec![vec![BigRational::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let t: BigRational = (0..n).map(|k| rat(&null_basis[i][k]) * &g_cols[j][k]).sum();
            gram[i][j] = t.clone();
            gram[j][i] = t;
        }
    }
    // linear term: V^T G d ; constant: d^T G d
    let gd: Vec<BigRational> = (0..n)
        .map(|i| (0..n).map(|j| &e.gram[i][j] * &d[j]).sum::<BigRational>())
        .collect();
    let lin: Vec<BigRational> = (0..m)
        .map(|i| (0..n).map(|k| rat(&null_basis[i][k]) * &gd[k]).sum())
        .collect();
    let konst: BigRational = (0..n).map(|i| &d[i] * &gd[i]).sum();
    // minimize: center solves gram * c = -lin
    let center =
        crate::linalg::solve_vec(&gram, &lin.iter().map(|x| -x.clone()).collect::<Vec<_>>())?;
    // Q(c) = (c - c*)^T gram (c - c*) + konst - c*^T gram c*
    let mut cstar_q = BigRational::zero();
    for i in 0..m {
        for j in 0..m {
            cstar_q += &gram[i][j] * &center[i] * &center[j];
        }
    }
    let radius = &e.radius - konst + cstar_q;
    Some(Ellipsoid {
        gram,
        center,
        radius,
    })
}
