//! Real scheme of a combinatorial patchwork.
//!
//! Signs are extended to the diamond, same-sign components are found over
//! uncrossed edges, antipodal boundary vertices glue components into regions
//! of the projective plane, and crossed edges join regions into the tree whose
//! canonical string is the scheme.

use serde::Serialize;

use crate::diamond::{reflect, DiamondComplex};
use crate::error::{Error, Result};
use crate::lattice::harnack_bound;
use crate::scheme::{Canonicalizer, SchemeTree};
use crate::sign::SignDistribution;
use crate::triangulation::Triangulation;
use crate::union_find::{ParityUnion, ParityUnionFind};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub scheme: String,
    pub oval_count: usize,
    pub region_count: usize,
    pub has_pseudoline: bool,
}

/// Every intermediate of one classification, for inspection and rendering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchworkAnalysis {
    /// extended sign per diamond vertex, `true` = `-`
    pub full_signs: Vec<bool>,
    /// per diamond edge: endpoints differ in sign
    pub crossed: Vec<bool>,
    /// `u32::MAX` for points no edge uses
    pub component_of: Vec<u32>,
    pub component_count: usize,
    /// per component
    pub region_of: Vec<u32>,
    pub region_count: usize,
    pub root_region: u32,
    /// deduplicated pairs of regions separated by a curve, smaller id first
    pub region_edges: Vec<[u32; 2]>,
    pub has_pseudoline: bool,
    pub tree: SchemeTree,
    pub scheme: String,
}

/// Regions of the projective plane as unions of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    pub region_of: Vec<u32>,
    pub region_count: usize,
    /// regions in which the antipodal gluing closes an odd cycle
    pub odd_cycle_regions: Vec<u32>,
}

/// Reusable buffers for repeated classification on one triangulation.
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    full: Vec<u8>,
    comp: Vec<u32>,
    stack: Vec<u32>,
    puf: ParityUnionFind,
    conflicts: Vec<u32>,
    root_map: Vec<u32>,
    region_of: Vec<u32>,
    odd: Vec<u32>,
    pairs: Vec<[u32; 2]>,
    same_side: Vec<u32>,
    crossed: Vec<[u32; 2]>,
    partner: Vec<u32>,
    mark: Vec<u32>,
    adj_off: Vec<u32>,
    adj: Vec<u32>,
    kid_off: Vec<u32>,
    kids: Vec<u32>,
    canon: Canonicalizer,
    scheme: String,
}

/// Vertex adjacency of the diamond in CSR form.
#[derive(Clone, Debug)]
struct Adjacency {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Adjacency {
    fn new(dc: &DiamondComplex) -> Self {
        let n = dc.vertices().len();
        let mut deg = vec![0u32; n + 1];
        for &[a, b] in dc.edges() {
            deg[a as usize + 1] += 1;
            deg[b as usize + 1] += 1;
        }
        for k in 0..n {
            deg[k + 1] += deg[k];
        }
        let mut fill = deg.clone();
        let mut targets = vec![0u32; 2 * dc.edges().len()];
        for &[a, b] in dc.edges() {
            targets[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }
        Adjacency {
            offsets: deg,
            targets,
        }
    }
}

fn check_degree(dc: &DiamondComplex, signs: &SignDistribution) -> Result<()> {
    if dc.degree() != signs.degree() {
        return Err(Error::DegreeMismatch {
            triangulation: dc.degree(),
            other: signs.degree(),
        });
    }
    Ok(())
}

/// Flood fill over same-sign neighbours; ids in order of first vertex.
/// Points that no edge uses keep `NONE`. Returns the component count and
/// `k` such that `crossed[..k]` lists every crossed edge once, lower
/// endpoint first.
fn components_into(
    adj: &Adjacency,
    full: &[u8],
    comp: &mut Vec<u32>,
    stack: &mut Vec<u32>,
    crossed: &mut Vec<[u32; 2]>,
) -> (usize, usize) {
    let n = full.len();
    // id << 1 | sign while filling; unvisited vertices carry all-ones ids
    const UNSEEN: u32 = NONE << 1;
    comp.clear();
    comp.extend(full.iter().map(|&f| UNSEEN | f as u32));
    // random signs make both tests coin flips, so the writes are
    // unconditional and only the lengths depend on them
    crossed.resize(adj.targets.len() / 2 + 1, [0, 0]);
    stack.clear();
    stack.resize(n + 1, 0);
    let mut ncross = 0;
    let mut next = 0u32;
    for s in 0..n {
        if comp[s] < UNSEEN || adj.offsets[s] == adj.offsets[s + 1] {
            continue;
        }
        comp[s] = next << 1 | full[s] as u32;
        stack[0] = s as u32;
        let mut top = 1;
        while top > 0 {
            top -= 1;
            let v = stack[top];
            let lv = comp[v as usize];
            let (lo, hi) = (adj.offsets[v as usize], adj.offsets[v as usize + 1]);
            for &w in &adj.targets[lo as usize..hi as usize] {
                let lw = comp[w as usize];
                let differ = (lw ^ lv) & 1 != 0;
                crossed[ncross] = [v, w];
                ncross += (differ & (v < w)) as usize;
                let fresh = !differ & (lw >= UNSEEN);
                comp[w as usize] = if fresh { lv } else { lw };
                stack[top] = w;
                top += fresh as usize;
            }
        }
        next += 1;
    }
    for c in comp.iter_mut() {
        *c = if *c >= UNSEEN { NONE } else { *c >> 1 };
    }
    (next as usize, ncross)
}

struct RegionBuffers<'a> {
    puf: &'a mut ParityUnionFind,
    conflicts: &'a mut Vec<u32>,
    root_map: &'a mut Vec<u32>,
    region_of: &'a mut Vec<u32>,
    odd: &'a mut Vec<u32>,
}

fn regions_into(dc: &DiamondComplex, comp: &[u32], ncomp: usize, buf: RegionBuffers<'_>) -> usize {
    let RegionBuffers {
        puf,
        conflicts,
        root_map,
        region_of,
        odd,
    } = buf;
    puf.reset(ncomp);
    conflicts.clear();
    for &[a, b] in dc.antipodal_pairs() {
        let (ca, cb) = (comp[a as usize], comp[b as usize]);
        // antipodes of unused points are unused
        if ca == NONE {
            continue;
        }
        if puf.union(ca, cb, 1) == ParityUnion::Conflict {
            conflicts.push(ca);
        }
    }
    root_map.clear();
    root_map.resize(ncomp, NONE);
    region_of.clear();
    let mut next = 0u32;
    for c in 0..ncomp as u32 {
        let (r, _) = puf.find(c);
        if root_map[r as usize] == NONE {
            root_map[r as usize] = next;
            next += 1;
        }
        region_of.push(root_map[r as usize]);
    }
    odd.clear();
    for &c in conflicts.iter() {
        odd.push(region_of[c as usize]);
    }
    odd.sort_unstable();
    odd.dedup();
    next as usize
}

/// Region pairs across crossed edges plus the distinct regions seen on both
/// sides of one. Pairs may repeat; a per-region partner slot drops most
/// repeats.
fn crossing_scan(crossed: &[[u32; 2]], comp: &[u32], region_of: &[u32], buf: ScanBuffers<'_>) {
    let ScanBuffers {
        partner,
        pairs,
        same_side,
    } = buf;
    partner.clear();
    partner.resize(region_of.len(), NONE);
    pairs.clear();
    same_side.clear();
    for &[a, b] in crossed {
        let ra = region_of[comp[a as usize] as usize];
        let rb = region_of[comp[b as usize] as usize];
        if ra == rb {
            if !same_side.contains(&ra) {
                same_side.push(ra);
            }
            continue;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        if partner[lo as usize] != hi {
            partner[lo as usize] = hi;
            pairs.push([lo, hi]);
        }
    }
}

struct ScanBuffers<'a> {
    partner: &'a mut Vec<u32>,
    pairs: &'a mut Vec<[u32; 2]>,
    same_side: &'a mut Vec<u32>,
}

fn crossed_edges(diamond: &DiamondComplex, full_signs: &[bool]) -> Vec<[u32; 2]> {
    diamond
        .edges()
        .iter()
        .copied()
        .filter(|&[a, b]| full_signs[a as usize] != full_signs[b as usize])
        .collect()
}

fn distinct_pairs(pairs: &[[u32; 2]]) -> Vec<[u32; 2]> {
    let mut out: Vec<[u32; 2]> = pairs.iter().map(|&[a, b]| [a.min(b), a.max(b)]).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn root_from(degree: u32, odd: &[u32], same_side: &[u32]) -> Result<u32> {
    if degree % 2 == 0 {
        if !same_side.is_empty() {
            return Err(Error::InvariantViolation(
                "even degree: a curve has the same region on both sides".into(),
            ));
        }
        match odd {
            [r] => Ok(*r),
            [] => Err(Error::InvariantViolation(
                "even degree: no non-orientable region".into(),
            )),
            _ => Err(Error::InvariantViolation(format!(
                "even degree: {} non-orientable regions",
                odd.len()
            ))),
        }
    } else {
        // the parity result only matters for even degree
        match same_side {
            [r] => Ok(*r),
            [] => Err(Error::InvariantViolation(
                "odd degree: no region borders the pseudoline".into(),
            )),
            _ => Err(Error::InvariantViolation(format!(
                "odd degree: {} regions border the pseudoline on both sides",
                same_side.len()
            ))),
        }
    }
}

struct TreeBuffers<'a> {
    adj_off: &'a mut Vec<u32>,
    adj: &'a mut Vec<u32>,
    order: &'a mut Vec<u32>,
    parent: &'a mut Vec<u32>,
    mark: &'a mut Vec<u32>,
    kid_off: &'a mut Vec<u32>,
    kids: &'a mut Vec<u32>,
}

/// Roots the region graph at `root`; `pairs` may repeat an adjacency. On
/// return `order` lists regions parent first and the children of `r` are
/// `kids[kid_off[r]..kid_off[r + 1]]`.
fn root_tree(n: usize, pairs: &[[u32; 2]], root: u32, buf: TreeBuffers<'_>) -> Result<()> {
    let TreeBuffers {
        adj_off,
        adj,
        order,
        parent,
        mark,
        kid_off,
        kids,
    } = buf;
    adj_off.clear();
    adj_off.resize(n + 1, 0);
    for &[a, b] in pairs {
        adj_off[a as usize + 1] += 1;
        adj_off[b as usize + 1] += 1;
    }
    for k in 0..n {
        adj_off[k + 1] += adj_off[k];
    }
    adj.clear();
    adj.resize(2 * pairs.len(), 0);
    kid_off.clear();
    kid_off.extend_from_slice(&adj_off[..n]);
    for &[a, b] in pairs {
        adj[kid_off[a as usize] as usize] = b;
        kid_off[a as usize] += 1;
        adj[kid_off[b as usize] as usize] = a;
        kid_off[b as usize] += 1;
    }

    parent.clear();
    parent.resize(n, NONE);
    mark.clear();
    mark.resize(n, NONE);
    parent[root as usize] = root;
    order.clear();
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let vu = v as usize;
        for &w in &adj[adj_off[vu] as usize..adj_off[vu + 1] as usize] {
            let wu = w as usize;
            if mark[wu] == v {
                continue;
            }
            mark[wu] = v;
            if parent[wu] == NONE {
                parent[wu] = v;
                order.push(w);
            } else if w != parent[vu] {
                return Err(Error::InvariantViolation("region graph has a cycle".into()));
            }
        }
    }
    if order.len() != n {
        return Err(Error::InvariantViolation(format!(
            "region graph is disconnected: {} of {n} regions reachable",
            order.len()
        )));
    }

    kid_off.clear();
    kid_off.resize(n + 1, 0);
    for &w in &order[1..] {
        kid_off[parent[w as usize] as usize + 1] += 1;
    }
    for k in 0..n {
        kid_off[k + 1] += kid_off[k];
    }
    kids.clear();
    kids.resize(n - 1, 0);
    // reuse adj_off as the fill cursor
    adj_off.clear();
    adj_off.extend_from_slice(&kid_off[..n]);
    for &w in &order[1..] {
        let p = parent[w as usize] as usize;
        kids[adj_off[p] as usize] = w;
        adj_off[p] += 1;
    }
    Ok(())
}

impl Scratch {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Classifies many sign distributions on one triangulation without
/// allocating per call.
#[derive(Clone, Debug)]
pub struct Classifier {
    diamond: DiamondComplex,
    adjacency: Adjacency,
    harnack: usize,
    scratch: Scratch,
}

impl Classifier {
    pub fn new(t: &Triangulation) -> Self {
        let diamond = reflect(t);
        let adjacency = Adjacency::new(&diamond);
        Classifier {
            harnack: harnack_bound(t.degree()),
            diamond,
            adjacency,
            scratch: Scratch::new(),
        }
    }

    pub fn diamond(&self) -> &DiamondComplex {
        &self.diamond
    }

    pub fn degree(&self) -> u32 {
        self.diamond.degree()
    }

    /// Runs the pipeline, leaving the scheme in scratch. Returns the oval count.
    pub(crate) fn run(&mut self, signs: &SignDistribution) -> Result<usize> {
        check_degree(&self.diamond, signs)?;
        let dc = &self.diamond;
        let s = &mut self.scratch;
        s.full.resize(dc.vertices().len(), 0);
        dc.extend_into(signs, &mut s.full);
        let (ncomp, ncross) = components_into(
            &self.adjacency,
            &s.full,
            &mut s.comp,
            &mut s.stack,
            &mut s.crossed,
        );
        let nreg = regions_into(
            dc,
            &s.comp,
            ncomp,
            RegionBuffers {
                puf: &mut s.puf,
                conflicts: &mut s.conflicts,
                root_map: &mut s.root_map,
                region_of: &mut s.region_of,
                odd: &mut s.odd,
            },
        );
        crossing_scan(
            &s.crossed[..ncross],
            &s.comp,
            &s.region_of,
            ScanBuffers {
                partner: &mut s.partner,
                pairs: &mut s.pairs,
                same_side: &mut s.same_side,
            },
        );
        let root = root_from(dc.degree(), &s.odd, &s.same_side)?;
        root_tree(
            nreg,
            &s.pairs,
            root,
            TreeBuffers {
                adj_off: &mut s.adj_off,
                adj: &mut s.adj,
                order: &mut s.stack,
                parent: &mut s.root_map,
                mark: &mut s.mark,
                kid_off: &mut s.kid_off,
                kids: &mut s.kids,
            },
        )?;
        let ovals = nreg - 1;
        if ovals > self.harnack {
            return Err(Error::InvariantViolation(format!(
                "{ovals} ovals exceed the bound {}",
                self.harnack
            )));
        }
        let pseudoline = dc.degree() % 2 == 1;
        s.canon
            .run(&s.stack, &s.kid_off, &s.kids, pseudoline, &mut s.scheme);
        Ok(ovals)
    }

    /// Scheme string of the last successful classification.
    pub fn last_scheme(&self) -> &str {
        &self.scratch.scheme
    }

    pub fn classify(&mut self, signs: &SignDistribution) -> Result<ClassificationResult> {
        let ovals = self.run(signs)?;
        Ok(ClassificationResult {
            scheme: self.scratch.scheme.clone(),
            oval_count: ovals,
            region_count: ovals + 1,
            has_pseudoline: self.degree() % 2 == 1,
        })
    }

    pub fn analyze(&mut self, signs: &SignDistribution) -> Result<PatchworkAnalysis> {
        let ovals = self.run(signs)?;
        let dc = &self.diamond;
        let s = &self.scratch;
        let full_signs: Vec<bool> = s.full.iter().map(|&b| b == 1).collect();
        let crossed = dc
            .edges()
            .iter()
            .map(|&[a, b]| s.full[a as usize] != s.full[b as usize])
            .collect();
        let root = s.stack[0];
        let region_count = ovals + 1;
        let mut node = vec![0usize; region_count];
        let mut tree = SchemeTree::new(dc.degree() % 2 == 1);
        for &v in &s.stack {
            let v = v as usize;
            for &w in &s.kids[s.kid_off[v] as usize..s.kid_off[v + 1] as usize] {
                node[w as usize] = tree.add_oval(node[v]);
            }
        }
        Ok(PatchworkAnalysis {
            full_signs,
            crossed,
            component_count: s.region_of.len(),
            component_of: s.comp.clone(),
            region_of: s.region_of.clone(),
            region_count,
            root_region: root,
            region_edges: distinct_pairs(&s.pairs),
            has_pseudoline: tree.has_pseudoline(),
            tree,
            scheme: s.scheme.clone(),
        })
    }
}

/// One-shot classification of `signs` on `t`.
pub fn classify(t: &Triangulation, signs: &SignDistribution) -> Result<ClassificationResult> {
    Classifier::new(t).classify(signs)
}

pub fn analyze(t: &Triangulation, signs: &SignDistribution) -> Result<PatchworkAnalysis> {
    Classifier::new(t).analyze(signs)
}

/// Same-sign components over uncrossed edges, numbered by first vertex.
/// Points outside every edge get `u32::MAX`.
pub fn component_partition(diamond: &DiamondComplex, full_signs: &[bool]) -> (Vec<u32>, usize) {
    let adj = Adjacency::new(diamond);
    let full: Vec<u8> = full_signs.iter().map(|&b| b as u8).collect();
    let mut comp = Vec::new();
    let (n, _) = components_into(&adj, &full, &mut comp, &mut Vec::new(), &mut Vec::new());
    (comp, n)
}

/// Glues components across antipodal boundary vertices.
pub fn region_partition(
    diamond: &DiamondComplex,
    component_of: &[u32],
    component_count: usize,
) -> RegionPartition {
    let mut region_of = Vec::new();
    let mut odd = Vec::new();
    let region_count = regions_into(
        diamond,
        component_of,
        component_count,
        RegionBuffers {
            puf: &mut ParityUnionFind::default(),
            conflicts: &mut Vec::new(),
            root_map: &mut Vec::new(),
            region_of: &mut region_of,
            odd: &mut odd,
        },
    );
    RegionPartition {
        region_of,
        region_count,
        odd_cycle_regions: odd,
    }
}

/// The non-orientable region for even degree, the region on both sides of
/// the pseudoline for odd degree.
pub fn detect_root(
    diamond: &DiamondComplex,
    full_signs: &[bool],
    component_of: &[u32],
    regions: &RegionPartition,
) -> Result<u32> {
    let mut edges = Vec::new();
    let mut same = Vec::new();
    crossing_scan(
        &crossed_edges(diamond, full_signs),
        component_of,
        &regions.region_of,
        ScanBuffers {
            partner: &mut Vec::new(),
            pairs: &mut edges,
            same_side: &mut same,
        },
    );
    root_from(diamond.degree(), &regions.odd_cycle_regions, &same)
}

/// The region adjacency tree rooted at `root`. Node ids of the result are
/// assigned breadth first.
pub fn region_tree(
    diamond: &DiamondComplex,
    full_signs: &[bool],
    component_of: &[u32],
    regions: &RegionPartition,
    root: u32,
) -> Result<SchemeTree> {
    let mut pairs = Vec::new();
    crossing_scan(
        &crossed_edges(diamond, full_signs),
        component_of,
        &regions.region_of,
        ScanBuffers {
            partner: &mut Vec::new(),
            pairs: &mut pairs,
            same_side: &mut Vec::new(),
        },
    );
    let (mut order, mut kid_off, mut kids) = (Vec::new(), Vec::new(), Vec::new());
    root_tree(
        regions.region_count,
        &pairs,
        root,
        TreeBuffers {
            adj_off: &mut Vec::new(),
            adj: &mut Vec::new(),
            order: &mut order,
            parent: &mut Vec::new(),
            mark: &mut Vec::new(),
            kid_off: &mut kid_off,
            kids: &mut kids,
        },
    )?;
    let mut node = vec![0usize; regions.region_count];
    let mut tree = SchemeTree::new(diamond.degree() % 2 == 1);
    for &v in &order {
        let v = v as usize;
        for &w in &kids[kid_off[v] as usize..kid_off[v + 1] as usize] {
            node[w as usize] = tree.add_oval(node[v]);
        }
    }
    Ok(tree)
}
