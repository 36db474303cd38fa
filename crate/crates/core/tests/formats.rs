mod common;

use tcurve::builtin::{builtin, NAMES};
use tcurve::enumeration::{sample, sweep, SweepOptions, SweepRange};
use tcurve::io::{
    read_histogram_csv, read_report_jsonl, read_triangulation, write_histogram_csv,
    write_report_jsonl, ReportParams,
};
use tcurve::scheme::parse_scheme;
use tcurve::{Error, SignDistribution};

#[test]
fn triangulation_json_round_trip() {
    for name in NAMES.iter().copied().chain(["delaunay-1", "delaunay-7"]) {
        let t = builtin(name).unwrap();
        let text = tcurve::io::write_triangulation(&t);
        let back = read_triangulation(&text, true).unwrap();
        assert_eq!(back, t, "{name}");
        assert_eq!(tcurve::io::write_triangulation(&back), text);
    }
}

#[test]
fn point_outside_the_triangle() {
    let text = r#"{"degree": 8, "edges": [[[0,0],[9,0]]]}"#;
    match read_triangulation(text, true) {
        Err(Error::PointOutOfRange { point, degree }) => {
            assert_eq!((point.i, point.j, degree), (9, 0, 8));
        }
        other => panic!("{other:?}"),
    }
    let neg = r#"{"degree": 2, "edges": [[[0,-1],[1,0]]]}"#;
    assert!(matches!(
        read_triangulation(neg, true),
        Err(Error::PointOutOfRange { .. })
    ));
}

#[test]
fn validation_names_the_problem() {
    // delaunay-2 with one diagonal removed
    let text = r#"{"degree": 2, "edges": [[[0,0],[1,0]],[[1,0],[2,0]],[[0,0],[0,1]],[[0,1],[0,2]],
        [[2,0],[1,1]],[[1,1],[0,2]],[[1,0],[0,1]],[[1,0],[1,1]]]}"#;
    let err = read_triangulation(text, true).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("9"), "{err}");
    let crossing = text.replace("[[0,0],[1,0]],", "[[0,0],[1,0]],[[0,0],[1,1]],");
    let err = read_triangulation(&crossing, true).unwrap_err();
    assert!(err.to_string().contains("(0,0)-(1,1)"), "{err}");
    let unknown = r#"{"degree": 1, "edges": [], "extra": 1}"#;
    assert!(matches!(
        read_triangulation(unknown, true),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn scheme_strings_are_fixed_points() {
    for s in [
        "<2 u 1<2>>",
        "<J u 1<1>>",
        "<0>",
        "<J>",
        "<1<1<1>>>",
        "<3 u 1<1> u 2<2>>",
    ] {
        let tree = parse_scheme(s).unwrap();
        assert_eq!(tree.canonical(), s);
        assert_eq!(parse_scheme(&tree.canonical()).unwrap().canonical(), s);
    }
    // non-canonical orders normalize
    assert_eq!(
        parse_scheme("<1<2> u 2>").unwrap().canonical(),
        "<2 u 1<2>>"
    );
    for bad in [
        "", "<>", "<1 u J>", "<01>", "<1<J>>", "<1 u>", "<2<0>>x", "<-1>",
    ] {
        match parse_scheme(bad) {
            Err(Error::Parse {
                line: 1, column, ..
            }) => assert!(column >= 1, "{bad}"),
            other => panic!("{bad}: {other:?}"),
        }
    }
}

#[test]
fn sign_strings() {
    let s = SignDistribution::parse(2, "100101").unwrap();
    assert_eq!(s.to_string(), "100101");
    assert!(s.get(0) && !s.get(1) && s.get(5));
    match SignDistribution::parse(2, "10x101") {
        Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
        other => panic!("{other:?}"),
    }
    assert!(SignDistribution::parse(2, "1001").is_err());
}

#[test]
fn reports_read_back() {
    let t = builtin("bowtie8").unwrap();
    let opts = SweepOptions::default();
    let r = sample(&t, 2000, 11, &opts).unwrap();
    common::check_report(&r);
    let params = ReportParams::Sample { n: 2000, seed: 11 };
    let text = write_report_jsonl(&r, &params).unwrap();
    assert_eq!(read_report_jsonl(&text).unwrap(), (params, r.clone()));
    assert_eq!(
        read_histogram_csv(&write_histogram_csv(&r)).unwrap(),
        r.histogram
    );

    let big = SweepRange::new(1 << 40, (1 << 40) + 500);
    let r = sweep(&t, big, &opts).unwrap();
    let params = ReportParams::Sweep {
        start: big.start,
        end: big.end,
    };
    let text = write_report_jsonl(&r, &params).unwrap();
    assert_eq!(read_report_jsonl(&text).unwrap().1, r);

    let mut lines: Vec<&str> = text.lines().collect();
    lines.swap(1, 2);
    let tampered = lines.join("\n").replace("\"count\":", "\"count\":1");
    assert!(read_report_jsonl(&tampered).is_err());
}
