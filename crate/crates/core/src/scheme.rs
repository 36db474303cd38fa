//! Rooted region trees and their canonical string form.
//!
//! Grammar of a canonical string:
//!
//! ```text
//! scheme := "<0>" | "<" items ">"
//! items  := item (" u " item)*
//! item   := "J" | INT | INT "<" items ">"
//! ```
//!
//! `k` is `k` empty ovals, `k<X>` is `k` ovals each containing `<X>`, and `J`
//! (top level only, listed first) is the pseudoline. Children are grouped by
//! their own canonical string and the groups appear in byte order of that
//! string, which puts the empty-oval group first.

use std::fmt;

use crate::error::{Error, Result};

/// A region tree: node 0 is the root region, every other node is an oval,
/// identified with the region it bounds from inside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeTree {
    pseudoline: bool,
    parent: Vec<u32>,
    children: Vec<Vec<u32>>,
}

impl SchemeTree {
    pub fn new(pseudoline: bool) -> Self {
        SchemeTree {
            pseudoline,
            parent: vec![u32::MAX],
            children: vec![Vec::new()],
        }
    }

    /// Adds an oval directly inside `parent` and returns its node id.
    pub fn add_oval(&mut self, parent: usize) -> usize {
        assert!(parent < self.children.len(), "no such node {parent}");
        let id = self.children.len();
        self.children.push(Vec::new());
        self.parent.push(parent as u32);
        self.children[parent].push(id as u32);
        id
    }

    pub fn has_pseudoline(&self) -> bool {
        self.pseudoline
    }

    pub fn oval_count(&self) -> usize {
        self.children.len() - 1
    }

    pub fn region_count(&self) -> usize {
        self.children.len()
    }

    pub fn children(&self, node: usize) -> &[u32] {
        &self.children[node]
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        (node != 0).then(|| self.parent[node] as usize)
    }

    /// Nesting depth of the deepest oval (0 for `<0>`).
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.children.len()];
        let mut best = 0;
        for v in 1..self.children.len() {
            // parents are always created first
            depth[v] = depth[self.parent[v] as usize] + 1;
            best = best.max(depth[v]);
        }
        best
    }

    pub fn canonical(&self) -> String {
        canonical_scheme(self)
    }
}

impl fmt::Display for SchemeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_scheme(self))
    }
}

pub fn canonical_scheme(tree: &SchemeTree) -> String {
    let n = tree.children.len();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(n);
    offsets.push(0u32);
    for c in &tree.children {
        targets.extend_from_slice(c);
        offsets.push(targets.len() as u32);
    }
    let mut order = Vec::with_capacity(n);
    order.push(0u32);
    let mut head = 0;
    while head < order.len() {
        let v = order[head] as usize;
        head += 1;
        order.extend_from_slice(&tree.children[v]);
    }
    let mut canon = Canonicalizer::default();
    let mut out = String::new();
    canon.run(&order, &offsets, &targets, tree.pseudoline, &mut out);
    out
}

/// Bottom-up tree canonicalization with reusable buffers.
#[derive(Clone, Debug, Default)]
pub(crate) struct Canonicalizer {
    arena: Vec<u8>,
    span: Vec<(u32, u32)>,
    kids: Vec<(u32, u32)>,
}

impl Canonicalizer {
    /// `order` lists nodes root first with every parent before its children;
    /// the children of `v` are `targets[offsets[v]..offsets[v + 1]]`.
    pub(crate) fn run(
        &mut self,
        order: &[u32],
        offsets: &[u32],
        targets: &[u32],
        pseudoline: bool,
        out: &mut String,
    ) {
        let n = offsets.len() - 1;
        self.arena.clear();
        self.span.clear();
        self.span.resize(n, (0, 0));
        let root = order[0];
        for &v in order.iter().rev() {
            self.kids.clear();
            let kids = &targets[offsets[v as usize] as usize..offsets[v as usize + 1] as usize];
            self.kids
                .extend(kids.iter().map(|&c| self.span[c as usize]));
            let arena = &self.arena;
            self.kids.sort_unstable_by(|a, b| {
                arena[a.0 as usize..a.1 as usize].cmp(&arena[b.0 as usize..b.1 as usize])
            });

            let start = self.arena.len();
            self.arena.push(b'<');
            let mut first = true;
            if v == root && pseudoline {
                self.arena.push(b'J');
                first = false;
            }
            let mut g = 0;
            while g < self.kids.len() {
                let (s, e) = self.kids[g];
                let mut k = g + 1;
                while k < self.kids.len() {
                    let (s2, e2) = self.kids[k];
                    if self.arena[s2 as usize..e2 as usize] != self.arena[s as usize..e as usize] {
                        break;
                    }
                    k += 1;
                }
                if !first {
                    self.arena.extend_from_slice(b" u ");
                }
                first = false;
                push_decimal(&mut self.arena, k - g);
                if &self.arena[s as usize..e as usize] != b"<0>" {
                    self.arena.extend_from_within(s as usize..e as usize);
                }
                g = k;
            }
            if first {
                self.arena.push(b'0');
            }
            self.arena.push(b'>');
            self.span[v as usize] = (start as u32, self.arena.len() as u32);
        }
        let (s, e) = self.span[root as usize];
        out.clear();
        // the arena only ever holds ASCII
        out.push_str(std::str::from_utf8(&self.arena[s as usize..e as usize]).expect("ascii"));
    }
}

fn push_decimal(buf: &mut Vec<u8>, mut k: usize) {
    let mut tmp = [0u8; 20];
    let mut n = 0;
    loop {
        tmp[n] = b'0' + (k % 10) as u8;
        n += 1;
        k /= 10;
        if k == 0 {
            break;
        }
    }
    buf.extend(tmp[..n].iter().rev());
}

const MAX_PARSED_OVALS: u64 = 1 << 22;
const MAX_NESTING: usize = 4096;

struct Group {
    count: u64,
    inner: Vec<Group>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    pseudoline: bool,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse_at(1, self.pos + 1, msg)
    }

    fn eat(&mut self, tok: &[u8]) -> bool {
        if self.s[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &[u8]) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", String::from_utf8_lossy(tok))))
        }
    }

    fn items(&mut self, top: bool, depth: usize) -> Result<Vec<Group>> {
        if depth > MAX_NESTING {
            return Err(self.err("nesting too deep"));
        }
        let mut out = Vec::new();
        let mut first = true;
        loop {
            if self.s.get(self.pos) == Some(&b'J') {
                if !(top && first) {
                    return Err(self.err("`J` may only appear first at the top level"));
                }
                self.pos += 1;
                self.pseudoline = true;
            } else {
                let count = self.int()?;
                let inner = if self.eat(b"<") {
                    let inner = self.items(false, depth + 1)?;
                    self.expect(b">")?;
                    inner
                } else {
                    Vec::new()
                };
                out.push(Group { count, inner });
            }
            first = false;
            if !self.eat(b" u ") {
                return Ok(out);
            }
        }
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a count or `J`"));
        }
        if self.s[start] == b'0' {
            self.pos = start;
            return Err(self.err("counts are positive without leading zeros"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("digits");
        text.parse::<u64>()
            .ok()
            .filter(|&k| k <= MAX_PARSED_OVALS)
            .ok_or_else(|| Error::parse_at(1, start + 1, "count too large"))
    }
}

fn size(groups: &[Group]) -> u64 {
    groups
        .iter()
        .map(|g| g.count.saturating_mul(1u64.saturating_add(size(&g.inner))))
        .fold(0u64, u64::saturating_add)
}

fn expand(tree: &mut SchemeTree, parent: usize, groups: &[Group]) {
    for g in groups {
        for _ in 0..g.count {
            let id = tree.add_oval(parent);
            expand(tree, id, &g.inner);
        }
    }
}

/// Parses any string matching the grammar; groups need not be in canonical
/// order or merged.
pub fn parse_scheme(s: &str) -> Result<SchemeTree> {
    if s == "<0>" {
        return Ok(SchemeTree::new(false));
    }
    let mut p = Parser {
        s: s.as_bytes(),
        pos: 0,
        pseudoline: false,
    };
    p.expect(b"<")?;
    let groups = p.items(true, 0)?;
    p.expect(b">")?;
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    if size(&groups) > MAX_PARSED_OVALS {
        return Err(Error::parse_at(1, 1, "scheme has too many ovals"));
    }
    let mut tree = SchemeTree::new(p.pseudoline);
    expand(&mut tree, 0, &groups);
    Ok(tree)
}
