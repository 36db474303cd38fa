//! Enumeration of all unimodular triangulations of `d·Δ₂` up to the order-6
//! symmetry group, by breadth-first search over the flip graph.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{check_degree, lattice_points, num_points, point_index};
use crate::lifting::{from_lifting, Lifting};
use crate::regularity::is_regular;
use crate::symmetry::SymmetryElement;
use crate::triangulation::Triangulation;

/// Largest degree searched without the long-run flag.
pub const DEFAULT_MAX_DEGREE: u32 = 4;
/// Largest degree searched at all.
pub const LONG_RUN_MAX_DEGREE: u32 = 5;

const WORDS: usize = 4;

/// Edge set as a bitset over point pairs `(a, b)`, `a < b`, in lexicographic
/// pair order. Orders like the sorted edge lists it encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct EdgeKey([u64; WORDS]);

impl Ord for EdgeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // the list holding the smallest differing edge is the smaller one
        for (a, b) in self.0.iter().zip(&other.0) {
            let x = a ^ b;
            if x != 0 {
                let low = x & x.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for EdgeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Codec {
    n: usize,
    /// point permutation per group element
    perms: Vec<Vec<u32>>,
    reflections: Vec<usize>,
}

impl Codec {
    fn new(degree: u32) -> Self {
        let pts = lattice_points(degree).expect("checked degree");
        let group = SymmetryElement::all();
        let perms = group
            .iter()
            .map(|g| {
                pts.iter()
                    .map(|&p| {
                        point_index(degree, g.apply(degree, p)).expect("symmetry preserves A(d)")
                            as u32
                    })
                    .collect()
            })
            .collect();
        let reflections = (0..6).filter(|&k| group[k].is_reflection()).collect();
        Codec {
            n: pts.len(),
            perms,
            reflections,
        }
    }

    fn pair(&self, a: u32, b: u32) -> usize {
        let (a, b) = (a.min(b) as usize, a.max(b) as usize);
        // rows of the strict upper triangle
        a * self.n - a * (a + 1) / 2 + (b - a - 1)
    }

    fn key(&self, edges: &[[u32; 2]], g: usize) -> EdgeKey {
        let perm = &self.perms[g];
        let mut k = [0u64; WORDS];
        for &[a, b] in edges {
            let p = self.pair(perm[a as usize], perm[b as usize]);
            k[p / 64] |= 1 << (p % 64);
        }
        EdgeKey(k)
    }

    fn canonical(&self, edges: &[[u32; 2]]) -> EdgeKey {
        (0..6)
            .map(|g| self.key(edges, g))
            .min()
            .expect("six images")
    }

    fn symmetric(&self, edges: &[[u32; 2]]) -> bool {
        let id = self.key(edges, 0);
        self.reflections.iter().any(|&g| self.key(edges, g) == id)
    }

    fn decode(&self, degree: u32, key: &EdgeKey) -> Triangulation {
        let mut edges = Vec::new();
        for a in 0..self.n as u32 {
            for b in a + 1..self.n as u32 {
                let p = self.pair(a, b);
                if key.0[p / 64] >> (p % 64) & 1 == 1 {
                    edges.push([a, b]);
                }
            }
        }
        Triangulation::from_index_edges(degree, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInfo {
    /// the orbit member with the smallest sorted edge list
    pub representative: Triangulation,
    pub symmetric: bool,
    pub regular: bool,
}

/// Census of unimodular triangulations modulo symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub degree: u32,
    pub filter_regular: bool,
    /// all orbits, sorted by representative
    pub orbits: Vec<OrbitInfo>,
}

impl CensusReport {
    /// Orbits passing the filter.
    pub fn selected(&self) -> impl Iterator<Item = &OrbitInfo> {
        self.orbits
            .iter()
            .filter(|o| !self.filter_regular || o.regular)
    }

    pub fn orbit_count(&self) -> usize {
        self.selected().count()
    }

    pub fn symmetric_count(&self) -> usize {
        self.selected().filter(|o| o.symmetric).count()
    }

    pub fn total_orbits(&self) -> usize {
        self.orbits.len()
    }

    pub fn total_symmetric(&self) -> usize {
        self.orbits.iter().filter(|o| o.symmetric).count()
    }

    pub fn non_regular(&self) -> impl Iterator<Item = &OrbitInfo> {
        self.orbits.iter().filter(|o| !o.regular)
    }
}

/// Flip-graph search from the triangulation of a generic lifting.
pub fn enumerate_unimodular(
    degree: u32,
    filter_regular: bool,
    long_run: bool,
) -> Result<CensusReport> {
    check_degree(degree)?;
    let limit = if long_run {
        LONG_RUN_MAX_DEGREE
    } else {
        DEFAULT_MAX_DEGREE
    };
    if degree > limit {
        return Err(Error::BudgetExceeded(if degree <= LONG_RUN_MAX_DEGREE {
            format!("census at degree {degree} needs the long-run flag")
        } else {
            format!("census is limited to degree {LONG_RUN_MAX_DEGREE}")
        }));
    }
    let seed = from_lifting(&Lifting::quadratic(degree)?);
    Ok(enumerate_from(&seed, filter_regular))
}

/// Same search from any unimodular starting triangulation.
pub fn enumerate_from(seed: &Triangulation, filter_regular: bool) -> CensusReport {
    let degree = seed.degree();
    assert!(
        num_points(degree) * (num_points(degree) - 1) / 2 <= 64 * WORDS,
        "degree too large for census keys"
    );
    let codec = Codec::new(degree);
    let mut seen: HashSet<EdgeKey> = HashSet::new();
    let mut queue = VecDeque::new();
    let start = codec.canonical(seed.edges());
    seen.insert(start);
    queue.push_back(start);
    let mut found = Vec::new();
    while let Some(key) = queue.pop_front() {
        let t = codec.decode(degree, &key);
        for (_, n) in t.flip_neighbors() {
            let k = codec.canonical(n.edges());
            if seen.insert(k) {
                queue.push_back(k);
            }
        }
        found.push((key, codec.symmetric(t.edges()), t));
    }
    found.sort_by_key(|a| a.0);
    let orbits = found
        .into_iter()
        .map(|(_, symmetric, t)| OrbitInfo {
            regular: is_regular(&t),
            symmetric,
            representative: t,
        })
        .collect();
    CensusReport {
        degree,
        filter_regular,
        orbits,
    }
}
