#![allow(dead_code)]

use rand::Rng;
use tcurve::classify::{ClassificationResult, PatchworkAnalysis};
use tcurve::enumeration::SweepReport;
use tcurve::scheme::parse_scheme;
use tcurve::{harnack_bound, num_points, SignDistribution};

pub fn random_signs<R: Rng>(rng: &mut R, d: u32) -> SignDistribution {
    SignDistribution::from_bits(d, (0..num_points(d)).map(|_| rng.gen::<bool>())).unwrap()
}

/// Counts that every classification must satisfy.
pub fn check_result(d: u32, r: &ClassificationResult) {
    assert_eq!(r.region_count, r.oval_count + 1, "{r:?}");
    assert_eq!(r.has_pseudoline, d % 2 == 1, "{r:?}");
    let components = r.oval_count + r.has_pseudoline as usize;
    assert!(
        components <= harnack_bound(d),
        "{r:?} exceeds the Harnack bound"
    );
    let tree = parse_scheme(&r.scheme).unwrap();
    assert_eq!(tree.oval_count(), r.oval_count);
    assert_eq!(tree.has_pseudoline(), r.has_pseudoline);
    assert_eq!(tree.canonical(), r.scheme);
}

/// The region graph is a tree: one edge per oval and connected.
pub fn check_analysis(a: &PatchworkAnalysis) {
    assert_eq!(a.region_edges.len() + 1, a.region_count);
    let mut parent: Vec<usize> = (0..a.region_count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &[u, v] in &a.region_edges {
        let (ru, rv) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
        assert_ne!(ru, rv, "region graph has a cycle");
        parent[ru] = rv;
    }
}

/// Report-level bounds: Harnack on the histogram, and the number of
/// nonempty schemes of degree 6 and of degree 8.
pub fn check_report(r: &SweepReport) {
    assert_eq!(r.histogram.iter().sum::<u64>(), r.total);
    assert_eq!(r.schemes.values().map(|s| s.count).sum::<u64>(), r.total);
    for scheme in r.schemes.keys() {
        let tree = parse_scheme(scheme).unwrap();
        assert_eq!(tree.has_pseudoline(), r.degree % 2 == 1);
        assert!(tree.oval_count() + tree.has_pseudoline() as usize <= harnack_bound(r.degree));
    }
    let nonempty = r.schemes.keys().filter(|s| s.as_str() != "<0>").count();
    match r.degree {
        6 => assert!(nonempty <= 55),
        7 => assert!(nonempty <= 121),
        8 => assert!(nonempty <= 359),
        _ => {}
    }
}
