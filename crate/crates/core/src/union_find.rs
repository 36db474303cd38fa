//! Disjoint sets, plain and with a parity label on each element.
//! Both are reset in place so they can live in reusable scratch space.

#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        let mut uf = UnionFind::default();
        uf.reset(n);
        uf
    }

    pub fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n as u32);
        self.rank.clear();
        self.rank.resize(n, 0);
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    #[inline]
    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns false if already joined.
    #[inline]
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (ka, kb) = (self.rank[ra as usize], self.rank[rb as usize]);
        if ka < kb {
            self.parent[ra as usize] = rb;
        } else {
            self.parent[rb as usize] = ra;
            if ka == kb {
                self.rank[ra as usize] += 1;
            }
        }
        true
    }
}

/// Union-find where each element carries a parity relative to its root.
#[derive(Clone, Debug, Default)]
pub struct ParityUnionFind {
    parent: Vec<u32>,
    parity: Vec<u8>,
    rank: Vec<u8>,
}

/// Outcome of imposing a parity constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityUnion {
    Merged,
    Consistent,
    /// the constraint closes an odd cycle
    Conflict,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        let mut uf = ParityUnionFind::default();
        uf.reset(n);
        uf
    }

    pub fn reset(&mut self, n: usize) {
        self.parent.clear();
        self.parent.extend(0..n as u32);
        self.parity.clear();
        self.parity.resize(n, 0);
        self.rank.clear();
        self.rank.resize(n, 0);
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find(&mut self, x: u32) -> (u32, u8) {
        // two passes keep this iterative
        let mut root = x;
        let mut acc = 0u8;
        while self.parent[root as usize] != root {
            acc ^= self.parity[root as usize];
            root = self.parent[root as usize];
        }
        let mut cur = x;
        let mut par = acc;
        while self.parent[cur as usize] != cur {
            let next = self.parent[cur as usize];
            let own = self.parity[cur as usize];
            self.parent[cur as usize] = root;
            self.parity[cur as usize] = par;
            par ^= own;
            cur = next;
        }
        (root, acc)
    }

    /// Impose `parity(a) ⊕ parity(b) = p`.
    pub fn union(&mut self, a: u32, b: u32, p: u8) -> ParityUnion {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return if pa ^ pb == p {
                ParityUnion::Consistent
            } else {
                ParityUnion::Conflict
            };
        }
        let link = pa ^ pb ^ p;
        let (ka, kb) = (self.rank[ra as usize], self.rank[rb as usize]);
        if ka < kb {
            self.parent[ra as usize] = rb;
            self.parity[ra as usize] = link;
        } else {
            self.parent[rb as usize] = ra;
            self.parity[rb as usize] = link;
            if ka == kb {
                self.rank[ra as usize] += 1;
            }
        }
        ParityUnion::Merged
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn plain() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert_eq!(uf.find(0), uf.find(1));
        assert_ne!(uf.find(0), uf.find(3));
        uf.reset(2);
        assert_eq!(uf.len(), 2);
        assert_ne!(uf.find(0), uf.find(1));
    }

    #[test]
    fn odd_triangle_conflicts() {
        let mut uf = ParityUnionFind::new(3);
        assert_eq!(uf.union(0, 1, 1), ParityUnion::Merged);
        assert_eq!(uf.union(1, 2, 1), ParityUnion::Merged);
        assert_eq!(uf.union(0, 2, 0), ParityUnion::Consistent);
        assert_eq!(uf.union(2, 0, 1), ParityUnion::Conflict);
    }

    proptest! {
        // parities agree with a 2-colouring computed by brute force
        #[test]
        fn parity_matches_bfs(edges in proptest::collection::vec((0u32..12, 0u32..12, 0u8..2), 0..30)) {
            let mut uf = ParityUnionFind::new(12);
            let mut accepted: Vec<(u32, u32, u8)> = Vec::new();
            for &(a, b, p) in &edges {
                match uf.union(a, b, p) {
                    ParityUnion::Conflict => {}
                    _ => accepted.push((a, b, p)),
                }
            }
            // colour by BFS over accepted constraints
            let mut colour = [u8::MAX; 12];
            for s in 0..12u32 {
                if colour[s as usize] != u8::MAX { continue; }
                colour[s as usize] = 0;
                let mut stack = vec![s];
                while let Some(x) = stack.pop() {
                    for &(a, b, p) in &accepted {
                        let (y, ok) = if a == x { (b, true) } else if b == x { (a, true) } else { (0, false) };
                        if ok && colour[y as usize] == u8::MAX {
                            colour[y as usize] = colour[x as usize] ^ p;
                            stack.push(y);
                        }
                    }
                }
            }
            for &(a, b, p) in &accepted {
                prop_assert_eq!(colour[a as usize] ^ colour[b as usize], p);
            }
            for a in 0..12u32 {
                for b in 0..12u32 {
                    let (ra, pa) = uf.find(a);
                    let (rb, pb) = uf.find(b);
                    if ra == rb {
                        prop_assert_eq!(pa ^ pb, colour[a as usize] ^ colour[b as usize]);
                    }
                }
            }
        }
    }
}
