//! Regularity test: does some lifting have `T` as its lower hull?
//!
//! `T` is regular iff there is `ω` that is strictly locally convex across
//! every interior edge. With `ab` the edge, `abc` counterclockwise and `e`
//! opposite `c`, local convexity reads
//!
//! ```text
//! orient(abc)·ω(e) − orient(ebc)·ω(a) − orient(aec)·ω(b) − orient(abe)·ω(c) > 0
//! ```
//!
//! We maximize a common slack `s ≤ 1` under `L_e(ω) ≥ s`; `T` is regular iff the
//! optimum is positive. A floating point solve proposes an integer lifting
//! that is checked exactly; only when that fails does the exact rational
//! simplex decide.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::orient;
use crate::lifting::Lifting;
use crate::triangulation::Triangulation;

/// One convexity constraint: `Σ coeff · ω(point) > 0`.
type Constraint = [(usize, i64); 4];

fn constraints(t: &Triangulation) -> Vec<Constraint> {
    let pts = t.points();
    t.interior_edges()
        .into_iter()
        .map(|([a, b], [c, e])| {
            let (a, b, mut c, mut e) = (a as usize, b as usize, c as usize, e as usize);
            if orient(pts[a], pts[b], pts[c]) < 0 {
                std::mem::swap(&mut c, &mut e);
            }
            let (pa, pb, pc, pe) = (pts[a], pts[b], pts[c], pts[e]);
            [
                (e, orient(pa, pb, pc)),
                (a, -orient(pe, pb, pc)),
                (b, -orient(pa, pe, pc)),
                (c, -orient(pa, pb, pe)),
            ]
        })
        .collect()
}

fn certifies(cons: &[Constraint], omega: &[i64]) -> bool {
    cons.iter().all(|row| {
        row.iter()
            .map(|&(k, c)| c as i128 * omega[k] as i128)
            .sum::<i128>()
            > 0
    })
}

/// Arithmetic needed by the simplex.
trait Field: Clone {
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_pos(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn lt(&self, o: &Self) -> bool;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
}

const EPS: f64 = 1e-9;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_pos(&self) -> bool {
        *self > EPS
    }
    fn is_zero(&self) -> bool {
        self.abs() <= EPS
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn lt(&self, o: &Self) -> bool {
        *self < *o - EPS
    }
}

/// Dense tableau for `max s` over `x ≥ 0`, `Ax ≤ b` with `b ≥ 0`.
struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    cost: Vec<F>,
    basis: Vec<usize>,
}

enum Outcome<F> {
    /// values of the structural variables at a point with `s > 0`
    Positive(Vec<F>),
    Zero,
    /// floating point gave up
    Stalled,
}

impl<F: Field> Tableau<F> {
    /// Variables: `u_k, v_k` for every free point, then `s`, then slacks.
    fn new(free: &[usize], cons: &[Constraint]) -> (Self, usize) {
        let nfree = free.len();
        let mut col = vec![usize::MAX; free.iter().max().map_or(0, |&m| m + 1)];
        for (k, &p) in free.iter().enumerate() {
            col[p] = k;
        }
        let s = 2 * nfree;
        let m = cons.len() + 1;
        let width = s + 1 + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (r, row) in cons.iter().enumerate() {
            let mut v = vec![F::zero(); width];
            // s - L(u - v) ≤ 0
            for &(p, c) in row {
                if let Some(&k) = col.get(p).filter(|&&k| k != usize::MAX) {
                    v[k] = v[k].sub(&F::from_i64(c));
                    v[nfree + k] = v[nfree + k].sub(&F::from_i64(-c));
                }
            }
            v[s] = F::from_i64(1);
            v[s + 1 + r] = F::from_i64(1);
            rows.push(v);
            rhs.push(F::zero());
        }
        let mut v = vec![F::zero(); width];
        v[s] = F::from_i64(1);
        v[width - 1] = F::from_i64(1);
        rows.push(v);
        rhs.push(F::from_i64(1));
        let mut cost = vec![F::zero(); width];
        cost[s] = F::from_i64(1);
        let basis = (0..m).map(|r| s + 1 + r).collect();
        (
            Tableau {
                rows,
                rhs,
                cost,
                basis,
            },
            s,
        )
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.div(&p);
        }
        self.rhs[r] = self.rhs[r].div(&p);
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
            self.rhs[i] = self.rhs[i].sub(&f.mul(&pivot_rhs));
        }
        let f = self.cost[c].clone();
        for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
            if !y.is_zero() {
                *x = x.sub(&f.mul(y));
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule; stops as soon as the basic solution has `s > 0`.
    fn solve(&mut self, s: usize, max_pivots: usize) -> Outcome<F> {
        for _ in 0..max_pivots {
            if let Some(r) = self.basis.iter().position(|&b| b == s) {
                if self.rhs[r].is_pos() {
                    let mut x = vec![F::zero(); s];
                    for (i, &b) in self.basis.iter().enumerate() {
                        if b < s {
                            x[b] = self.rhs[i].clone();
                        }
                    }
                    return Outcome::Positive(x);
                }
            }
            let Some(c) = self.cost.iter().position(|x| x.is_pos()) else {
                return Outcome::Zero;
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].div(&self.rows[i][c]);
                best = match best {
                    None => Some((i, ratio)),
                    Some((j, r)) => {
                        if ratio.lt(&r) || (!r.lt(&ratio) && self.basis[i] < self.basis[j]) {
                            Some((i, ratio))
                        } else {
                            Some((j, r))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                // the bound on s rules this out
                None => return Outcome::Stalled,
            }
        }
        Outcome::Stalled
    }
}

/// A lifting whose lower hull is `t`, if one exists.
pub fn regular_lifting(t: &Triangulation) -> Option<Lifting> {
    let d = t.degree();
    let n = t.points().len();
    let cons = constraints(t);
    if cons.is_empty() {
        return Some(Lifting::zero(d).expect("valid degree"));
    }
    // affine functions change nothing; pin ω at three corners of the unit cell
    let pinned = [0, 1, d as usize + 1];
    let free: Vec<usize> = (0..n).filter(|k| !pinned.contains(k)).collect();
    let lift = |x: &dyn Fn(usize) -> i64| {
        let values: Vec<i64> = (0..n).map(x).collect();
        // constant shifts and positive scaling keep the certificate
        let low = values.iter().copied().min().unwrap_or(0);
        let g = values.iter().fold(0i64, |g, v| g.gcd(&(v - low))).max(1);
        Lifting::new(d, values.into_iter().map(|v| (v - low) / g).collect()).expect("sized to A(d)")
    };

    let (mut fast, s) = Tableau::<f64>::new(&free, &cons);
    if let Outcome::Positive(x) = fast.solve(s, 50 * (s + cons.len())) {
        let nfree = free.len();
        let mut omega = vec![0i64; n];
        for scale in [1e3, 1e6, 1e9] {
            for (k, &p) in free.iter().enumerate() {
                omega[p] = ((x[k] - x[nfree + k]) * scale).round() as i64;
            }
            if certifies(&cons, &omega) {
                return Some(lift(&|k| omega[k]));
            }
        }
    }

    let (mut exact, s) = Tableau::<BigRational>::new(&free, &cons);
    match exact.solve(s, usize::MAX) {
        Outcome::Positive(x) => {
            let nfree = free.len();
            let vals: Vec<BigRational> = (0..nfree).map(|k| &x[k] - &x[nfree + k]).collect();
            let den = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let mut omega = vec![0i64; n];
            for (k, &p) in free.iter().enumerate() {
                let v = &vals[k] * BigRational::from_integer(den.clone());
                omega[p] = i64::try_from(v.to_integer()).ok()?;
            }
            debug_assert!(certifies(&cons, &omega));
            certifies(&cons, &omega).then(|| lift(&|k| omega[k]))
        }
        Outcome::Zero => None,
        Outcome::Stalled => unreachable!("exact simplex with Bland's rule terminates"),
    }
}

pub fn is_regular(t: &Triangulation) -> bool {
    regular_lifting(t).is_some()
}

/// Checks the strict local convexity of `omega` across every interior edge.
pub fn is_certificate(t: &Triangulation, omega: &Lifting) -> bool {
    omega.degree() == t.degree() && certifies(&constraints(t), omega.values())
}
