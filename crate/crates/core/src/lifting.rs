//! Regular triangulations from lifting functions.
//!
//! The lower convex hull of `{(i, j, ω(i, j))}` is computed by gift wrapping
//! with exact integer predicates. Heights are compared symbolically as
//! `ω + ε·(i² + ij + j²) + ε²·π`, where `π` pulls points down
//! lexicographically by canonical index. The quadratic term puts every point of
//! a lower face in strictly convex position, and `π` breaks the remaining
//! cocircular ties, so every predicate has a definite sign.
//!
//! Points that lie strictly above the lower hull of `ω` are first lowered
//! onto it (their height becomes the value of the lower convex envelope), so
//! the result always uses every lattice point.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{check_degree, lattice_points, num_points, orient, LatticePoint};
use crate::triangulation::Triangulation;

/// A lifting function `ω : A(d) → ℤ`, one value per point in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lifting {
    degree: u32,
    values: Vec<i64>,
}

impl Lifting {
    pub fn new(degree: u32, values: Vec<i64>) -> Result<Self> {
        check_degree(degree)?;
        let n = num_points(degree);
        if values.len() != n {
            return Err(Error::parse_at(
                1,
                1,
                format!(
                    "lifting has {} values, degree {degree} needs {n}",
                    values.len()
                ),
            ));
        }
        Ok(Lifting { degree, values })
    }

    pub fn from_fn(degree: u32, f: impl Fn(LatticePoint) -> i64) -> Result<Self> {
        let values = lattice_points(degree)?.into_iter().map(f).collect();
        Ok(Lifting { degree, values })
    }

    pub fn zero(degree: u32) -> Result<Self> {
        Self::from_fn(degree, |_| 0)
    }

    /// `ω(i, j) = i² + ij + j²`.
    pub fn quadratic(degree: u32) -> Result<Self> {
        Self::from_fn(degree, quadratic)
    }

    /// Independent uniform values in `[0, span)`.
    pub fn random<R: Rng + ?Sized>(degree: u32, span: i64, rng: &mut R) -> Result<Self> {
        check_degree(degree)?;
        let span = span.max(1);
        let values = (0..num_points(degree))
            .map(|_| rng.gen_range(0..span))
            .collect();
        Ok(Lifting { degree, values })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

fn quadratic(p: LatticePoint) -> i64 {
    let (i, j) = (p.i as i64, p.j as i64);
    i * i + i * j + j * j
}

/// Rational height `num / den`, `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Height {
    num: i128,
    den: i128,
}

impl Height {
    fn int(v: i64) -> Self {
        Height {
            num: v as i128,
            den: 1,
        }
    }
}

struct Lifted<'a> {
    pts: &'a [LatticePoint],
    heights: Vec<Height>,
    quad: Vec<i64>,
    integral: bool,
}

impl Lifted<'_> {
    /// Sign of `Σ c·h(p)` under the symbolic perturbation. Never zero as long
    /// as some coefficient is non-zero.
    fn sign(&self, terms: &[(usize, i64)]) -> i32 {
        let s = self.height_sign(terms);
        if s != 0 {
            return s;
        }
        let q: i128 = terms
            .iter()
            .map(|&(p, c)| c as i128 * self.quad[p] as i128)
            .sum();
        if q != 0 {
            return q.signum() as i32;
        }
        // pulling: the lowest-index point carries the dominant −ε term
        terms
            .iter()
            .filter(|&&(_, c)| c != 0)
            .min_by_key(|&&(p, _)| p)
            .map(|&(_, c)| -(c.signum() as i32))
            .unwrap_or(0)
    }

    fn height_sign(&self, terms: &[(usize, i64)]) -> i32 {
        if self.integral {
            let mut acc: i128 = 0;
            let mut ok = true;
            for &(p, c) in terms {
                match (c as i128)
                    .checked_mul(self.heights[p].num)
                    .and_then(|x| acc.checked_add(x))
                {
                    Some(v) => acc = v,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return acc.signum() as i32;
            }
        } else if let Some(s) = self.rational_sign_checked(terms) {
            return s;
        }
        self.rational_sign_big(terms)
    }

    fn rational_sign_checked(&self, terms: &[(usize, i64)]) -> Option<i32> {
        let mut acc: i128 = 0;
        for (x, &(p, c)) in terms.iter().enumerate() {
            let mut t = (c as i128).checked_mul(self.heights[p].num)?;
            for (y, &(r, _)) in terms.iter().enumerate() {
                if x != y {
                    t = t.checked_mul(self.heights[r].den)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc.signum() as i32)
    }

    fn rational_sign_big(&self, terms: &[(usize, i64)]) -> i32 {
        let mut acc = BigInt::zero();
        for (x, &(p, c)) in terms.iter().enumerate() {
            let mut t = BigInt::from(c) * BigInt::from(self.heights[p].num);
            for (y, &(r, _)) in terms.iter().enumerate() {
                if x != y {
                    t *= BigInt::from(self.heights[r].den);
                }
            }
            acc += t;
        }
        if acc.is_zero() {
            0
        } else if acc.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Is the lifted `q` strictly above the plane through lifted `a, b, c`?
    fn above(&self, a: usize, b: usize, c: usize, q: usize) -> bool {
        let (pa, pb, pc, pq) = (self.pts[a], self.pts[b], self.pts[c], self.pts[q]);
        let o = orient(pa, pb, pc);
        debug_assert!(o != 0);
        let terms = [
            (q, o),
            (a, -orient(pq, pb, pc)),
            (b, -orient(pa, pq, pc)),
            (c, -orient(pa, pb, pq)),
        ];
        self.sign(&terms) * o.signum() as i32 > 0
    }

    /// Compares slopes from `a` along a line: is `w2` strictly below the
    /// segment from `a` to `w1`? `t1`, `t2` are positive distances along the line.
    fn below_chord(&self, a: usize, w1: usize, t1: i64, w2: usize, t2: i64) -> bool {
        // (h2 - ha)·t1 - (h1 - ha)·t2 < 0
        let terms = [(w2, t1), (w1, -t2), (a, t2 - t1)];
        self.sign(&terms) < 0
    }
}

/// Lower-hull triangles (ccw index triples) of the lifted configuration.
fn lower_hull(degree: u32, lifted: &Lifted<'_>) -> Vec<[usize; 3]> {
    let pts = lifted.pts;
    let n = pts.len();
    let d = degree as i32;

    // first hull edge: from the corner (0,0) along the side j = 0
    let a = 0usize;
    let side: Vec<usize> = (0..n).filter(|&k| pts[k].j == 0 && pts[k].i > 0).collect();
    let mut b = side[0];
    for &w in &side[1..] {
        if lifted.below_chord(a, b, pts[b].i as i64, w, pts[w].i as i64) {
            b = w;
        }
    }
    debug_assert!(pts[b].i <= d);

    let mut triangles = Vec::new();
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    let mut seen: HashSet<[usize; 3]> = HashSet::new();
    // directed edges whose right-hand side is still unexplored
    let mut stack = vec![(b, a)];
    done.insert((a.min(b), a.max(b)));
    while let Some((u, v)) = stack.pop() {
        let (pu, pv) = (pts[u], pts[v]);
        let mut best: Option<usize> = None;
        for w in 0..n {
            if orient(pu, pv, pts[w]) >= 0 {
                continue;
            }
            best = match best {
                None => Some(w),
                Some(cur) if !lifted.above(u, v, cur, w) => Some(w),
                keep => keep,
            };
        }
        let Some(w) = best else { continue };
        // ccw triangle (v, u, w); a triangle can be reached from two sides
        let mut key = [u, v, w];
        key.sort_unstable();
        if seen.insert(key) {
            triangles.push([v, u, w]);
        }
        for (x, y) in [(u, w), (w, v)] {
            if done.insert((x.min(y), x.max(y))) {
                stack.push((x, y));
            }
        }
    }
    triangles
}

fn in_closed_triangle(pts: &[LatticePoint], t: [usize; 3], p: LatticePoint) -> bool {
    let [a, b, c] = t.map(|k| pts[k]);
    orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The regular triangulation induced by `ω`, refined to use every lattice
/// point. Always succeeds; the result is unimodular and regular.
pub fn from_lifting(lifting: &Lifting) -> Triangulation {
    let degree = lifting.degree;
    let pts = lattice_points(degree).expect("degree validated at construction");
    let quad: Vec<i64> = pts.iter().map(|&p| quadratic(p)).collect();
    let mut lifted = Lifted {
        pts: &pts,
        heights: lifting.values.iter().map(|&v| Height::int(v)).collect(),
        quad,
        integral: true,
    };
    let mut triangles = lower_hull(degree, &lifted);

    let mut used = vec![false; pts.len()];
    for t in &triangles {
        for &k in t {
            used[k] = true;
        }
    }
    if used.iter().any(|u| !u) {
        // lower the redundant points onto the hull and wrap again
        for p in (0..pts.len()).filter(|&k| !used[k]) {
            let t = *triangles
                .iter()
                .find(|&&t| in_closed_triangle(&pts, t, pts[p]))
                .expect("hull triangles cover the polygon");
            let [a, b, c] = t;
            let (pa, pb, pc, pp) = (pts[a], pts[b], pts[c], pts[p]);
            let o = orient(pa, pb, pc) as i128;
            let num = orient(pp, pb, pc) as i128 * lifting.values[a] as i128
                + orient(pa, pp, pc) as i128 * lifting.values[b] as i128
                + orient(pa, pb, pp) as i128 * lifting.values[c] as i128;
            let g = gcd_i128(num, o).max(1);
            lifted.heights[p] = Height {
                num: num / g,
                den: o / g,
            };
        }
        lifted.integral = lifted.heights.iter().all(|h| h.den == 1);
        triangles = lower_hull(degree, &lifted);
    }

    let mut edges = Vec::with_capacity(triangles.len() * 2);
    for &[a, b, c] in &triangles {
        for (x, y) in [(a, b), (b, c), (c, a)] {
            edges.push([x.min(y) as u32, x.max(y) as u32]);
        }
    }
    let t = Triangulation::from_index_edges(degree, edges);
    debug_assert_eq!(t.triangles().len(), (degree * degree) as usize);
    t
}
