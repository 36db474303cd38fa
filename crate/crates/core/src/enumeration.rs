//! Sign representatives, exhaustive sweeps, seeded sampling and report
//! aggregation.
//!
//! Adding `ε₀ + ε₁·i + ε₂·j` (mod 2) to every sign does not change the curve,
//! so each orbit has one representative with zero signs at `(0,0)`, `(0,1)`
//! and `(1,0)`; the remaining `|A| - 3` bits are the binary digits of the
//! representative index, least significant digit at the smallest free point.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::classify::Classifier;
use crate::error::{Error, Result};
use crate::lattice::{harnack_bound, num_points};
use crate::sign::SignDistribution;
use crate::triangulation::Triangulation;

/// Canonical indices of `(0,0)`, `(0,1)` and `(1,0)`.
fn fixed_indices(degree: u32) -> [usize; 3] {
    [0, 1, degree as usize + 1]
}

/// Number of bits in an index: `|A| - 3` for representatives, `|A|` raw.
pub fn index_bits(degree: u32, raw: bool) -> usize {
    num_points(degree) - if raw { 0 } else { 3 }
}

/// Size of the index space, if it fits in `u128`.
pub fn index_limit(degree: u32, raw: bool) -> Option<u128> {
    let bits = index_bits(degree, raw);
    (bits < 128).then(|| 1u128 << bits)
}

fn check_index(degree: u32, raw: bool, m: u128) -> Result<()> {
    match index_limit(degree, raw) {
        Some(limit) if m >= limit => Err(Error::IndexOutOfRange { index: m, limit }),
        _ => Ok(()),
    }
}

/// Maps index bits to canonical point indices.
#[derive(Clone, Debug)]
struct IndexCodec {
    degree: u32,
    positions: Vec<usize>,
}

impl IndexCodec {
    fn new(degree: u32, raw: bool) -> Self {
        let fixed = fixed_indices(degree);
        let positions = (0..num_points(degree))
            .filter(|k| raw || !fixed.contains(k))
            .collect();
        IndexCodec { degree, positions }
    }

    fn write(&self, m: u128, out: &mut SignDistribution) {
        out.clear();
        let mut rest = m;
        let mut b = 0;
        while rest != 0 {
            if rest & 1 == 1 {
                out.set(self.positions[b], true);
            }
            rest >>= 1;
            b += 1;
        }
    }

    fn decode(&self, m: u128) -> SignDistribution {
        let mut s = SignDistribution::zeros(self.degree).expect("valid degree");
        self.write(m, &mut s);
        s
    }

    fn encode(&self, s: &SignDistribution) -> Result<u128> {
        if self.positions.len() > 128 {
            return Err(Error::IndexOutOfRange {
                index: u128::MAX,
                limit: u128::MAX,
            });
        }
        Ok(self
            .positions
            .iter()
            .enumerate()
            .filter(|&(_, &p)| s.get(p))
            .fold(0u128, |acc, (b, _)| acc | 1 << b))
    }
}

/// The representative with index `m`.
pub fn representative(degree: u32, m: u128) -> Result<SignDistribution> {
    SignDistribution::zeros(degree)?;
    check_index(degree, false, m)?;
    Ok(IndexCodec::new(degree, false).decode(m))
}

/// The raw sign distribution whose bit `k` is bit `k` of `m`.
pub fn raw_sign(degree: u32, m: u128) -> Result<SignDistribution> {
    SignDistribution::zeros(degree)?;
    check_index(degree, true, m)?;
    Ok(IndexCodec::new(degree, true).decode(m))
}

/// Raw index of a sign distribution.
pub fn raw_index(signs: &SignDistribution) -> Result<u128> {
    IndexCodec::new(signs.degree(), true).encode(signs)
}

/// Applies the unique `ε` clearing the three fixed bits; returns the
/// representative and its index.
pub fn normalize_sign(signs: &SignDistribution) -> Result<(SignDistribution, u128)> {
    let d = signs.degree();
    let [o, y, x] = fixed_indices(d);
    let e0 = signs.get(o);
    let e2 = signs.get(y) ^ e0;
    let e1 = signs.get(x) ^ e0;
    let mut out = signs.clone();
    let mut k = 0;
    for i in 0..=d {
        for j in 0..=(d - i) {
            let flip = e0 ^ (e1 && i % 2 == 1) ^ (e2 && j % 2 == 1);
            out.set(k, signs.get(k) ^ flip);
            k += 1;
        }
    }
    let m = IndexCodec::new(d, false).encode(&out)?;
    Ok((out, m))
}

/// Half-open interval of indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepRange {
    pub start: u128,
    pub end: u128,
}

impl SweepRange {
    pub fn new(start: u128, end: u128) -> Self {
        SweepRange { start, end }
    }

    /// The whole representative (or raw) index space.
    pub fn full(degree: u32, raw: bool) -> Result<Self> {
        let end = index_limit(degree, raw).ok_or(Error::IndexOutOfRange {
            index: u128::MAX,
            limit: u128::MAX,
        })?;
        Ok(SweepRange { start: 0, end })
    }

    pub fn len(&self) -> u128 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self, degree: u32, raw: bool) -> Result<()> {
        if self.start > self.end {
            return Err(Error::IndexOutOfRange {
                index: self.start,
                limit: self.end,
            });
        }
        match index_limit(degree, raw) {
            Some(limit) if self.end > limit => Err(Error::IndexOutOfRange {
                index: self.end,
                limit,
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchemeStat {
    pub count: u64,
    /// smallest index observed with this scheme
    pub witness: u128,
}

/// Histogram and scheme table of a batch of classifications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub degree: u32,
    pub fingerprint: String,
    /// indices are raw sign indices rather than representative indices
    pub raw: bool,
    /// count per oval number `0..=M(d)`
    pub histogram: Vec<u64>,
    pub schemes: BTreeMap<String, SchemeStat>,
    pub total: u64,
}

impl SweepReport {
    pub fn empty(t: &Triangulation, raw: bool) -> Self {
        SweepReport {
            degree: t.degree(),
            fingerprint: fingerprint(t),
            raw,
            histogram: vec![0; harnack_bound(t.degree()) + 1],
            schemes: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn max_ovals(&self) -> Option<usize> {
        self.histogram.iter().rposition(|&c| c > 0)
    }

    /// Sign distribution of a witness index.
    pub fn witness_signs(&self, index: u128) -> Result<SignDistribution> {
        if self.raw {
            raw_sign(self.degree, index)
        } else {
            representative(self.degree, index)
        }
    }

    /// Adds one observation; the histogram must already cover `ovals`.
    pub fn record(&mut self, scheme: &str, ovals: usize, index: u128) -> Result<()> {
        let slot = self.histogram.get_mut(ovals).ok_or_else(|| {
            Error::InvariantViolation(format!(
                "{ovals} ovals exceed the bound at degree {}",
                self.degree
            ))
        })?;
        *slot += 1;
        self.total += 1;
        match self.schemes.get_mut(scheme) {
            Some(stat) => {
                stat.count += 1;
                stat.witness = stat.witness.min(index);
            }
            None => {
                self.schemes.insert(
                    scheme.to_string(),
                    SchemeStat {
                        count: 1,
                        witness: index,
                    },
                );
            }
        }
        Ok(())
    }
}

/// SHA-256 over the sorted edge list, one `i1,j1,i2,j2` line per edge.
pub fn fingerprint(t: &Triangulation) -> String {
    let mut h = Sha256::new();
    for (a, b) in t.edge_points() {
        h.update(format!("{},{},{},{}\n", a.i, a.j, b.i, b.j).as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Combines two reports over the same triangulation and index space.
pub fn merge(a: &SweepReport, b: &SweepReport) -> Result<SweepReport> {
    if a.degree != b.degree || a.fingerprint != b.fingerprint {
        return Err(Error::MergeMismatch(format!(
            "degree {} / {} vs degree {} / {}",
            a.degree, a.fingerprint, b.degree, b.fingerprint
        )));
    }
    if a.raw != b.raw {
        return Err(Error::MergeMismatch(
            "raw and representative index spaces".into(),
        ));
    }
    let mut out = a.clone();
    for (h, x) in out.histogram.iter_mut().zip(&b.histogram) {
        *h += x;
    }
    out.total += b.total;
    for (k, s) in &b.schemes {
        out.schemes
            .entry(k.clone())
            .and_modify(|t| {
                t.count += s.count;
                t.witness = t.witness.min(s.witness);
            })
            .or_insert(*s);
    }
    Ok(out)
}

pub const DEFAULT_CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub workers: usize,
    pub chunk: u64,
    /// index the raw `2^|A|` space instead of representatives
    pub raw: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            workers: 1,
            chunk: DEFAULT_CHUNK,
            raw: false,
        }
    }
}

/// Per-worker accumulator with an allocation-free hot path.
struct Partial {
    histogram: Vec<u64>,
    schemes: HashMap<String, SchemeStat>,
    total: u64,
}

impl Partial {
    fn new(bins: usize) -> Self {
        Partial {
            histogram: vec![0; bins],
            schemes: HashMap::new(),
            total: 0,
        }
    }

    fn record(&mut self, scheme: &str, ovals: usize, index: u128) {
        self.histogram[ovals] += 1;
        self.total += 1;
        match self.schemes.get_mut(scheme) {
            Some(stat) => {
                stat.count += 1;
                stat.witness = stat.witness.min(index);
            }
            None => {
                self.schemes.insert(
                    scheme.to_string(),
                    SchemeStat {
                        count: 1,
                        witness: index,
                    },
                );
            }
        }
    }

    fn into_report(self, base: &SweepReport) -> SweepReport {
        SweepReport {
            histogram: self.histogram,
            schemes: self.schemes.into_iter().collect(),
            total: self.total,
            ..base.clone()
        }
    }
}

/// Runs `job(chunk, classifier, signs, partial)` over `chunks` chunks on
/// `workers` threads and merges the partial reports.
fn run_chunks<F>(t: &Triangulation, chunks: u64, opts: &SweepOptions, job: F) -> Result<SweepReport>
where
    F: Fn(u64, &mut Classifier, &mut SignDistribution, &mut Partial) -> Result<()> + Sync,
{
    if opts.workers == 0 {
        return Err(Error::InvariantViolation(
            "at least one worker is required".into(),
        ));
    }
    let base = SweepReport::empty(t, opts.raw);
    let bins = base.histogram.len();
    let next = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let proto = Classifier::new(t);
    let workers = opts.workers.min(chunks.max(1) as usize);
    let partials: Vec<Partial> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let (next, abort, failure, job, proto) = (&next, &abort, &failure, &job, &proto);
                scope.spawn(move || {
                    let mut classifier = proto.clone();
                    let mut signs = SignDistribution::zeros(t.degree()).expect("valid degree");
                    let mut partial = Partial::new(bins);
                    while !abort.load(Ordering::Relaxed) {
                        let c = next.fetch_add(1, Ordering::Relaxed);
                        if c >= chunks {
                            break;
                        }
                        if let Err(e) = job(c, &mut classifier, &mut signs, &mut partial) {
                            abort.store(true, Ordering::Relaxed);
                            let mut slot = failure.lock().expect("no panics while held");
                            // keep the smallest failing index for determinism
                            let replace = match (&*slot, &e) {
                                (None, _) => true,
                                (
                                    Some(Error::Sweep { index: a, .. }),
                                    Error::Sweep { index: b, .. },
                                ) => b < a,
                                _ => false,
                            };
                            if replace {
                                *slot = Some(e);
                            }
                            break;
                        }
                    }
                    partial
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    if let Some(e) = failure.into_inner().expect("no panics while held") {
        return Err(e);
    }
    partials
        .into_iter()
        .map(|p| p.into_report(&base))
        .try_fold(base.clone(), |acc, r| merge(&acc, &r))
}

fn classify_index(
    classifier: &mut Classifier,
    signs: &SignDistribution,
    index: u128,
    partial: &mut Partial,
) -> Result<()> {
    let ovals = classifier.run(signs).map_err(|e| Error::Sweep {
        index,
        source: Box::new(e),
    })?;
    partial.record(classifier.last_scheme(), ovals, index);
    Ok(())
}

/// Classifies every index in `range`.
pub fn sweep(t: &Triangulation, range: SweepRange, opts: &SweepOptions) -> Result<SweepReport> {
    range.check(t.degree(), opts.raw)?;
    let chunk = opts.chunk.max(1) as u128;
    let chunks = range.len().div_ceil(chunk);
    let chunks = u64::try_from(chunks)
        .map_err(|_| Error::BudgetExceeded("range has too many chunks".into()))?;
    let codec = IndexCodec::new(t.degree(), opts.raw);
    run_chunks(t, chunks, opts, |c, classifier, signs, partial| {
        let lo = range.start + c as u128 * chunk;
        let hi = (lo + chunk).min(range.end);
        for m in lo..hi {
            codec.write(m, signs);
            classify_index(classifier, signs, m, partial)?;
        }
        Ok(())
    })
}

/// Uniform index for draw `k` of the stream keyed by `seed`.
struct Draws {
    bits: usize,
    words_per_draw: u128,
    rng: ChaCha8Rng,
}

impl Draws {
    fn new(seed: u64, bits: usize) -> Self {
        Draws {
            bits,
            words_per_draw: if bits <= 64 { 2 } else { 4 },
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn seek(&mut self, k: u64) {
        self.rng.set_word_pos(k as u128 * self.words_per_draw);
    }

    fn next(&mut self) -> u128 {
        if self.bits == 0 {
            // keep the stream position consistent
            self.rng.next_u64();
            return 0;
        }
        if self.bits <= 64 {
            (self.rng.next_u64() >> (64 - self.bits)) as u128
        } else {
            let hi = self.rng.next_u64() as u128;
            let lo = self.rng.next_u64() as u128;
            ((hi << 64) | lo) >> (128 - self.bits)
        }
    }
}

/// Classifies `n` indices drawn uniformly from a stream keyed by `seed`;
/// draw `k` depends only on `(seed, k)`.
pub fn sample(t: &Triangulation, n: u64, seed: u64, opts: &SweepOptions) -> Result<SweepReport> {
    let bits = index_bits(t.degree(), opts.raw);
    if bits > 128 {
        return Err(Error::IndexOutOfRange {
            index: u128::MAX,
            limit: u128::MAX,
        });
    }
    let chunk = opts.chunk.max(1);
    let chunks = n.div_ceil(chunk);
    let codec = IndexCodec::new(t.degree(), opts.raw);
    run_chunks(t, chunks, opts, |c, classifier, signs, partial| {
        let lo = c * chunk;
        let hi = (lo + chunk).min(n);
        let mut draws = Draws::new(seed, bits);
        draws.seek(lo);
        for _ in lo..hi {
            let m = draws.next();
            codec.write(m, signs);
            classify_index(classifier, signs, m, partial)?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{from_lifting, Lifting};

    fn delaunay(d: u32) -> Triangulation {
        from_lifting(&Lifting::quadratic(d).unwrap())
    }

    #[test]
    fn representative_codec() {
        assert_eq!(representative(2, 0).unwrap().to_string(), "000000");
        assert_eq!(representative(2, 1).unwrap().to_string(), "001000");
        // the next free index skips (1,0) at position 3
        assert_eq!(representative(2, 2).unwrap().to_string(), "000010");
        assert!(matches!(
            representative(2, 8),
            Err(Error::IndexOutOfRange { index: 8, limit: 8 })
        ));
        assert_eq!(representative(1, 0).unwrap().to_string(), "000");
        assert!(representative(1, 1).is_err());
    }

    #[test]
    fn normalize_examples() {
        let s = SignDistribution::parse(1, "111").unwrap();
        let (r, m) = normalize_sign(&s).unwrap();
        assert_eq!((r.to_string().as_str(), m), ("000", 0));
        for m in 0..64 {
            let r = representative(3, m).unwrap();
            assert_eq!(normalize_sign(&r).unwrap(), (r, m));
        }
    }

    #[test]
    fn raw_codec() {
        let s = raw_sign(2, 0b100101).unwrap();
        assert_eq!(s.to_string(), "101001");
        assert_eq!(raw_index(&s).unwrap(), 0b100101);
    }

    #[test]
    fn degree_one_sweep() {
        let t = delaunay(1);
        let r = sweep(
            &t,
            SweepRange::full(1, false).unwrap(),
            &SweepOptions::default(),
        )
        .unwrap();
        assert_eq!(r.total, 1);
        assert_eq!(
            r.schemes["<J>"],
            SchemeStat {
                count: 1,
                witness: 0
            }
        );
        let raw = SweepOptions {
            raw: true,
            ..Default::default()
        };
        let r = sweep(&t, SweepRange::full(1, true).unwrap(), &raw).unwrap();
        assert_eq!(r.total, 8);
        assert_eq!(r.schemes.len(), 1);
    }

    #[test]
    fn split_and_merge() {
        let t = delaunay(3);
        let opts = SweepOptions::default();
        let all = sweep(&t, SweepRange::new(0, 128), &opts).unwrap();
        let a = sweep(&t, SweepRange::new(0, 64), &opts).unwrap();
        let b = sweep(&t, SweepRange::new(64, 128), &opts).unwrap();
        assert_eq!(merge(&a, &b).unwrap(), all);
        assert_eq!(merge(&b, &a).unwrap(), all);
        let empty = SweepReport::empty(&t, false);
        assert_eq!(merge(&all, &empty).unwrap(), all);
        assert!(matches!(
            merge(&all, &SweepReport::empty(&delaunay(2), false)),
            Err(Error::MergeMismatch(_))
        ));
    }

    #[test]
    fn workers_and_chunks_do_not_matter() {
        let t = delaunay(4);
        let range = SweepRange::full(4, false).unwrap();
        let base = sweep(&t, range, &SweepOptions::default()).unwrap();
        for (workers, chunk) in [(2, 7), (8, 1000), (3, 1 << 16)] {
            let opts = SweepOptions {
                workers,
                chunk,
                raw: false,
            };
            assert_eq!(sweep(&t, range, &opts).unwrap(), base);
        }
        let s1 = sample(&t, 5000, 3, &SweepOptions::default()).unwrap();
        let s2 = sample(
            &t,
            5000,
            3,
            &SweepOptions {
                workers: 4,
                chunk: 333,
                raw: false,
            },
        )
        .unwrap();
        assert_eq!(s1, s2);
        assert_ne!(s1, sample(&t, 5000, 4, &SweepOptions::default()).unwrap());
    }

    #[test]
    fn range_checks() {
        let t = delaunay(2);
        let opts = SweepOptions::default();
        assert!(sweep(&t, SweepRange::new(0, 9), &opts).is_err());
        assert!(sweep(&t, SweepRange::new(5, 4), &opts).is_err());
        assert_eq!(sweep(&t, SweepRange::new(3, 3), &opts).unwrap().total, 0);
        assert_eq!(sample(&t, 1, 0, &opts).unwrap().total, 1);
    }

    #[test]
    fn wide_index_space_draws() {
        // more than 64 index bits
        let t = delaunay(11);
        let r = sample(&t, 20, 1, &SweepOptions::default()).unwrap();
        assert_eq!(r.total, 20);
        assert!(r.schemes.keys().all(|s| s.starts_with("<J")));
    }
}
