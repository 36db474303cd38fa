//! File formats: triangulation JSON, sweep reports as JSON Lines, and the
//! oval histogram as CSV.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::enumeration::{normalize_sign, raw_index, SchemeStat, SweepReport};
use crate::error::{Error, Result};
use crate::lattice::{harnack_bound, LatticePoint};
use crate::scheme::parse_scheme;
use crate::sign::SignDistribution;
use crate::triangulation::{validate_triangulation, Triangulation};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TriangulationFile {
    degree: i64,
    edges: Vec<[[i64; 2]; 2]>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse_at(e.line(), e.column(), e.to_string())
}

fn to_point(degree: u32, p: [i64; 2]) -> Result<LatticePoint> {
    let ok = |v: i64| i32::try_from(v).ok();
    match (ok(p[0]), ok(p[1])) {
        (Some(i), Some(j)) if LatticePoint::new(i, j).in_triangle(degree) => {
            Ok(LatticePoint::new(i, j))
        }
        _ => Err(Error::PointOutOfRange {
            point: LatticePoint::new(
                p[0].clamp(i32::MIN as i64, i32::MAX as i64) as i32,
                p[1].clamp(i32::MIN as i64, i32::MAX as i64) as i32,
            ),
            degree,
        }),
    }
}

/// Parses `{"degree": d, "edges": [[[i1,j1],[i2,j2]], ...]}`. Duplicate
/// edges are rejected in either orientation. With `validate = false` the
/// triangle set is rebuilt without the unimodularity checks.
pub fn read_triangulation(text: &str, validate: bool) -> Result<Triangulation> {
    let file: TriangulationFile = serde_json::from_str(text).map_err(json_error)?;
    let degree = u32::try_from(file.degree)
        .ok()
        .filter(|&d| d >= 1)
        .ok_or(Error::InvalidDegree(file.degree))?;
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(file.edges.len());
    for [a, b] in file.edges {
        let (a, b) = (to_point(degree, a)?, to_point(degree, b)?);
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::DuplicateEdge { a, b });
        }
        edges.push((a, b));
    }
    if validate {
        validate_triangulation(degree, &edges)
    } else {
        Triangulation::from_edges_unchecked(degree, &edges)
    }
}

/// Compact single-line JSON with edges in canonical order.
pub fn write_triangulation(t: &Triangulation) -> String {
    let file = TriangulationFile {
        degree: t.degree() as i64,
        edges: t
            .edge_points()
            .into_iter()
            .map(|(a, b)| [[a.i as i64, a.j as i64], [b.i as i64, b.j as i64]])
            .collect(),
    };
    serde_json::to_string(&file).expect("plain data serializes")
}

/// How a report was produced; written as the first JSONL record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReportParams {
    Sweep { start: u128, end: u128 },
    Sample { n: u64, seed: u64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    record: String,
    degree: u32,
    fingerprint: String,
    raw: bool,
    total: u64,
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl Header {
    fn params(&self) -> Result<ReportParams> {
        match (self.mode.as_str(), self.start, self.end, self.n, self.seed) {
            ("sweep", Some(start), Some(end), None, None) if start <= end => {
                Ok(ReportParams::Sweep { start, end })
            }
            ("sample", None, None, Some(n), Some(seed)) => Ok(ReportParams::Sample { n, seed }),
            _ => Err(Error::parse_at(
                1,
                1,
                "header needs mode sweep with start/end or sample with n/seed",
            )),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeRecord {
    scheme: String,
    count: u64,
    witness: String,
}

/// Header line, then one record per scheme in byte order of the scheme.
pub fn write_report_jsonl(report: &SweepReport, params: &ReportParams) -> Result<String> {
    let mut header = Header {
        record: "header".into(),
        degree: report.degree,
        fingerprint: report.fingerprint.clone(),
        raw: report.raw,
        total: report.total,
        mode: String::new(),
        start: None,
        end: None,
        n: None,
        seed: None,
    };
    match *params {
        ReportParams::Sweep { start, end } => {
            header.mode = "sweep".into();
            (header.start, header.end) = (Some(start), Some(end));
        }
        ReportParams::Sample { n, seed } => {
            header.mode = "sample".into();
            (header.n, header.seed) = (Some(n), Some(seed));
        }
    }
    let mut out = serde_json::to_string(&header).expect("plain data serializes");
    out.push('\n');
    for (scheme, stat) in &report.schemes {
        let rec = SchemeRecord {
            scheme: scheme.clone(),
            count: stat.count,
            witness: report.witness_signs(stat.witness)?.to_string(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("plain data serializes"));
        out.push('\n');
    }
    Ok(out)
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse {
            column, message, ..
        } => Error::Parse {
            line,
            column,
            message,
        },
        other => other,
    }
}

/// Inverse of [`write_report_jsonl`]; the histogram is rebuilt from the
/// schemes.
pub fn read_report_jsonl(text: &str) -> Result<(ReportParams, SweepReport)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines
        .next()
        .ok_or_else(|| Error::parse_at(1, 1, "empty report"))?;
    let header: Header = serde_json::from_str(first).map_err(json_error)?;
    if header.record != "header" {
        return Err(Error::parse_at(1, 1, "first record must be the header"));
    }
    let params = header.params()?;
    let d = header.degree;
    SignDistribution::zeros(d)?;
    let mut report = SweepReport {
        degree: d,
        fingerprint: header.fingerprint,
        raw: header.raw,
        histogram: vec![0; harnack_bound(d) + 1],
        schemes: BTreeMap::new(),
        total: 0,
    };
    for (k, line) in lines {
        let rec: SchemeRecord =
            serde_json::from_str(line).map_err(|e| at_line(k + 1, json_error(e)))?;
        let tree = parse_scheme(&rec.scheme).map_err(|e| at_line(k + 1, e))?;
        let signs = SignDistribution::parse(d, &rec.witness).map_err(|e| at_line(k + 1, e))?;
        let witness = if report.raw {
            raw_index(&signs)?
        } else {
            let (rep, m) = normalize_sign(&signs)?;
            if rep != signs {
                return Err(Error::parse_at(k + 1, 1, "witness is not a representative"));
            }
            m
        };
        let bin = report
            .histogram
            .get_mut(tree.oval_count())
            .ok_or_else(|| Error::parse_at(k + 1, 1, "oval count exceeds the bound"))?;
        *bin += rec.count;
        report.total += rec.count;
        if report
            .schemes
            .insert(
                rec.scheme,
                SchemeStat {
                    count: rec.count,
                    witness,
                },
            )
            .is_some()
        {
            return Err(Error::parse_at(k + 1, 1, "duplicate scheme record"));
        }
    }
    if report.total != header.total {
        return Err(Error::parse_at(
            1,
            1,
            format!(
                "header total {} but records sum to {}",
                header.total, report.total
            ),
        ));
    }
    Ok((params, report))
}

/// `ovals,count` for every oval number `0..=M(d)`.
pub fn write_histogram_csv(report: &SweepReport) -> String {
    let mut out = String::from("ovals,count\n");
    for (k, c) in report.histogram.iter().enumerate() {
        out.push_str(&format!("{k},{c}\n"));
    }
    out
}

pub fn read_histogram_csv(text: &str) -> Result<Vec<u64>> {
    let mut lines = text.lines();
    if lines.next() != Some("ovals,count") {
        return Err(Error::parse_at(1, 1, "expected header `ovals,count`"));
    }
    let mut out = Vec::new();
    for (k, line) in lines.enumerate() {
        let line_no = k + 2;
        let (a, b) = line
            .split_once(',')
            .ok_or_else(|| Error::parse_at(line_no, 1, "expected two fields"))?;
        let ovals: usize = a
            .parse()
            .map_err(|_| Error::parse_at(line_no, 1, "bad oval count"))?;
        let count: u64 = b
            .parse()
            .map_err(|_| Error::parse_at(line_no, a.len() + 2, "bad count"))?;
        if ovals != out.len() {
            return Err(Error::parse_at(
                line_no,
                1,
                format!("expected oval count {}", out.len()),
            ));
        }
        out.push(count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{sample, sweep, SweepOptions, SweepRange};
    use crate::lifting::{from_lifting, Lifting};

    #[test]
    fn triangulation_round_trip() {
        for d in 1..=6 {
            let t = from_lifting(&Lifting::quadratic(d).unwrap());
            let text = write_triangulation(&t);
            assert_eq!(read_triangulation(&text, true).unwrap(), t);
        }
    }

    #[test]
    fn triangulation_errors() {
        let bad = r#"{"degree": 1, "edges": [[[0,0],[1,0]], [[1,0],[0,0]], [[0,1],[0,0]]]}"#;
        assert!(matches!(
            read_triangulation(bad, true),
            Err(Error::DuplicateEdge { .. })
        ));
        let out = r#"{"degree": 1, "edges": [[[0,0],[2,0]]]}"#;
        assert!(matches!(
            read_triangulation(out, true),
            Err(Error::PointOutOfRange { .. })
        ));
        let syntax = "{\"degree\": 1,\n \"edges\": [[[0,0],[1,0]],]}";
        match read_triangulation(syntax, true) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            read_triangulation(r#"{"degree": 0, "edges": []}"#, true),
            Err(Error::InvalidDegree(0))
        ));
    }

    #[test]
    fn report_round_trip() {
        let t = from_lifting(&Lifting::quadratic(4).unwrap());
        let r = sweep(&t, SweepRange::new(0, 300), &SweepOptions::default()).unwrap();
        let params = ReportParams::Sweep { start: 0, end: 300 };
        let text = write_report_jsonl(&r, &params).unwrap();
        assert!(text.starts_with("{\"record\":\"header\""));
        assert_eq!(read_report_jsonl(&text).unwrap(), (params, r.clone()));
        assert_eq!(
            read_histogram_csv(&write_histogram_csv(&r)).unwrap(),
            r.histogram
        );

        let raw = SweepOptions {
            raw: true,
            ..Default::default()
        };
        let s = sample(&t, 100, 9, &raw).unwrap();
        let params = ReportParams::Sample { n: 100, seed: 9 };
        let text = write_report_jsonl(&s, &params).unwrap();
        assert_eq!(read_report_jsonl(&text).unwrap(), (params, s));
    }
}
