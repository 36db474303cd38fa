mod common;

use tcurve::builtin::builtin;
use tcurve::enumeration::{sample, SweepOptions, SweepReport};

/// Percent of sign distributions per oval count for the three builtin
/// degree-8 triangulations.
const BOWTIE: &[(usize, f64)] = &[
    (4, 4.6875),
    (6, 11.3281),
    (8, 14.6484),
    (10, 25.5371),
    (12, 17.1997),
    (14, 13.9526),
    (16, 10.9695),
    (18, 1.6113),
    (20, 0.0652),
    (22, 0.0004),
];

const MIDDLE: &[(usize, f64)] = &[
    (2, 0.293),
    (3, 1.7578),
    (4, 4.1504),
    (5, 6.4941),
    (6, 10.0647),
    (7, 14.0991),
    (8, 15.6433),
    (9, 12.5443),
    (10, 6.7974),
    (11, 3.7655),
    (12, 4.5805),
    (13, 6.1824),
    (14, 6.326),
    (15, 4.3626),
    (16, 2.0241),
    (17, 0.6985),
    (18, 0.1847),
    (19, 0.0253),
    (20, 0.0064),
];

const RIGHT: &[(usize, f64)] = &[
    (3, 0.0572),
    (4, 0.5581),
    (5, 2.5065),
    (6, 6.8969),
    (7, 13.0667),
    (8, 18.1908),
    (9, 19.4337),
    (10, 16.4603),
    (11, 11.3434),
    (12, 6.488),
    (13, 3.1214),
    (14, 1.2716),
    (15, 0.439),
    (16, 0.1279),
    (17, 0.0311),
    (18, 0.0062),
    (19, 0.001),
    (20, 0.0001),
];

const N: u64 = 200_000;
/// percentage points per bin; binomial noise at 2e5 draws is below 0.09
const TOL: f64 = 0.5;

fn run(name: &str, seed: u64) -> SweepReport {
    let t = builtin(name).unwrap();
    let r = sample(&t, N, seed, &SweepOptions::default()).unwrap();
    common::check_report(&r);
    assert_eq!(r.total, N);
    r
}

fn worst_bin(r: &SweepReport, expected: &[(usize, f64)]) -> (usize, f64) {
    let mut worst = (0, 0.0);
    for (k, &count) in r.histogram.iter().enumerate() {
        let want = expected
            .iter()
            .find(|&&(o, _)| o == k)
            .map_or(0.0, |&(_, p)| p);
        let got = 100.0 * count as f64 / r.total as f64;
        if (got - want).abs() > worst.1 {
            worst = (k, (got - want).abs());
        }
    }
    worst
}

#[test]
fn tables_sum_to_one_hundred() {
    for table in [BOWTIE, MIDDLE, RIGHT] {
        let s: f64 = table.iter().map(|&(_, p)| p).sum();
        assert!((s - 100.0).abs() < 1e-3, "{s}");
    }
}

#[test]
fn bowtie_histogram() {
    let r = run("bowtie8", 11);
    let (k, dev) = worst_bin(&r, BOWTIE);
    assert!(dev <= TOL, "bin {k} off by {dev:.4} points");
    for (k, &c) in r.histogram.iter().enumerate() {
        if k % 2 == 1 || k < 4 {
            assert_eq!(c, 0, "mass at {k} ovals");
        }
    }
    assert!(r.schemes.len() <= 123);
}

#[test]
fn middle_histogram() {
    let r = run("fig2-middle8", 12);
    let (k, dev) = worst_bin(&r, MIDDLE);
    assert!(dev <= TOL, "bin {k} off by {dev:.4} points");
    assert!(r.schemes.len() <= 359);
    // odd counts do occur here, unlike on the bow-tie
    assert!(r.histogram.iter().skip(1).step_by(2).any(|&c| c > 0));
}

#[test]
fn right_histogram() {
    let r = run("fig2-right8", 13);
    let (k, dev) = worst_bin(&r, RIGHT);
    assert!(dev <= TOL, "bin {k} off by {dev:.4} points");
    assert!(r.schemes.len() <= 353);
}
