//! Plain-text formats.
//!
//! Sites: one `x y r` triple per line; ids follow line order. Blank lines
//! and lines starting with `#` are ignored.
//!
//! Spanners: a header `n m t k c`, then `m` lines `src dst length`.

use std::io::{self, BufRead, Write};

use crate::geometry::{validate_sites, Site, SiteError};
use crate::spanner::SpannerGraph;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(r: impl BufRead) -> impl Iterator<Item = Result<(usize, String), io::Error>> {
    r.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(l) => {
            let t = l.trim();
            (!t.is_empty() && !t.starts_with('#')).then(|| Ok((i + 1, t.to_string())))
        }
        Err(e) => Some(Err(e)),
    })
}

fn fields<T: std::str::FromStr>(line: usize, text: &str, want: usize) -> Result<Vec<T>, FormatError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != want {
        return Err(parse_err(line, format!("expected {want} fields, found {}", parts.len())));
    }
    parts.iter().map(|p| p.parse().map_err(|_| parse_err(line, format!("cannot parse {p:?}")))).collect()
}

pub fn read_sites(r: impl BufRead) -> Result<Vec<Site>, FormatError> {
    let mut sites = Vec::new();
    for l in content_lines(r) {
        let (line, text) = l?;
        let v: Vec<f64> = fields(line, &text, 3)?;
        sites.push(Site::new(sites.len(), v[0], v[1], v[2]));
    }
    validate_sites(&sites)?;
    Ok(sites)
}

pub fn write_sites(mut w: impl Write, sites: &[Site]) -> io::Result<()> {
    writeln!(w, "# x y r")?;
    for s in sites {
        writeln!(w, "{} {} {}", s.x, s.y, s.radius)?;
    }
    Ok(())
}

pub fn write_spanner(mut w: impl Write, h: &SpannerGraph) -> io::Result<()> {
    writeln!(w, "{} {} {} {} {}", h.n, h.m(), h.t, h.k, h.c)?;
    for (a, b, l) in h.edges() {
        writeln!(w, "{a} {b} {l}")?;
    }
    Ok(())
}

pub fn read_spanner(r: impl BufRead) -> Result<SpannerGraph, FormatError> {
    let mut lines = content_lines(r);
    let (line, header) = lines.next().ok_or_else(|| parse_err(0, "missing header"))??;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 {
        return Err(parse_err(line, "header must be `n m t k c`"));
    }
    let bad = |p: &str| parse_err(line, format!("cannot parse {p:?}"));
    let n: usize = h[0].parse().map_err(|_| bad(h[0]))?;
    let m: usize = h[1].parse().map_err(|_| bad(h[1]))?;
    let t: f64 = h[2].parse().map_err(|_| bad(h[2]))?;
    let k: usize = h[3].parse().map_err(|_| bad(h[3]))?;
    let c: u32 = h[4].parse().map_err(|_| bad(h[4]))?;
    let mut edges = Vec::with_capacity(m);
    for l in lines {
        let (line, text) = l?;
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(parse_err(line, "edge must be `src dst length`"));
        }
        let a: usize = parts[0].parse().map_err(|_| parse_err(line, "bad source"))?;
        let b: usize = parts[1].parse().map_err(|_| parse_err(line, "bad target"))?;
        let len: f64 = parts[2].parse().map_err(|_| parse_err(line, "bad length"))?;
        if a >= n || b >= n || a == b {
            return Err(parse_err(line, format!("edge {a} -> {b} invalid for n = {n}")));
        }
        edges.push(((a as u32, b as u32), len));
    }
    if edges.len() != m {
        return Err(FormatError::EdgeCount { expected: m, found: edges.len() });
    }
    edges.sort_unstable_by_key(|e| e.0);
    edges.dedup_by_key(|e| e.0);
    let (pairs, lengths) = edges.into_iter().unzip();
    Ok(SpannerGraph::with_lengths(n, pairs, lengths, t, k, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spanner::{build_spanner, BuildOptions, Variant};

    #[test]
    fn sites_round_trip() {
        let sites = vec![Site::new(0, 0.1, -2.5, 1.0), Site::new(1, 1e-7, 3.0, 0.3333333333333333)];
        let mut buf = Vec::new();
        write_sites(&mut buf, &sites).unwrap();
        assert_eq!(read_sites(&buf[..]).unwrap(), sites);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# header\n\n1 2 3\n  # indented\n4 5 6\n";
        let sites = read_sites(text.as_bytes()).unwrap();
        assert_eq!(sites, vec![Site::new(0, 1.0, 2.0, 3.0), Site::new(1, 4.0, 5.0, 6.0)]);
    }

    #[test]
    fn malformed_sites_rejected() {
        assert!(matches!(read_sites("1 2\n".as_bytes()), Err(FormatError::Parse { line: 1, .. })));
        assert!(matches!(read_sites("1 2 x\n".as_bytes()), Err(FormatError::Parse { .. })));
        assert!(matches!(read_sites("1 2 -1\n".as_bytes()), Err(FormatError::Site(_))));
    }

    #[test]
    fn spanner_round_trip() {
        let sites: Vec<Site> = (0..20).map(|i| Site::new(i, (i % 5) as f64, (i / 5) as f64, 1.5)).collect();
        let (h, _) = build_spanner(&sites, 2.0, Variant::Spread, BuildOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_spanner(&mut buf, &h).unwrap();
        assert_eq!(read_spanner(&buf[..]).unwrap(), h);
    }

    #[test]
    fn spanner_edge_count_checked() {
        let text = "3 2 2 101 68\n0 1 1.0\n";
        assert!(matches!(read_spanner(text.as_bytes()), Err(FormatError::EdgeCount { expected: 2, found: 1 })));
        assert!(matches!(read_spanner("3 1 2 101 68\n0 5 1.0\n".as_bytes()), Err(FormatError::Parse { line: 2, .. })));
    }
}
