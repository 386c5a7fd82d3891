//! Text formats for points, chains, scenes, certificates and instance metadata.
//!
//! Point files hold one point per line (`x y` or `x y z`); blank lines and
//! lines starting with `#` are skipped. Chain files hold one vertex per line
//! with a blank line between chains. A scene file starts with a `q: x y`
//! line, followed by the boundary chain and then one chain per hole.

use serde::{Deserialize, Serialize};

use crate::entropy::RangePartition;
use crate::geometry::{Point2, Point3};
use crate::{Error, Result};

fn numbers<const K: usize>(line: &str, lineno: usize) -> Result<[i64; K]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != K {
        return Err(Error::Parse { line: lineno, msg: format!("expected {K} integers, found {}", fields.len()) });
    }
    let mut out = [0i64; K];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("not an integer: {f:?}") })?;
    }
    Ok(out)
}

fn skip(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

pub fn read_points2(text: &str) -> Result<Vec<Point2>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !skip(l))
        .map(|(i, l)| numbers::<2>(l, i + 1).and_then(|[x, y]| Point2::try_new(x, y)))
        .collect()
}

pub fn read_points3(text: &str) -> Result<Vec<Point3>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !skip(l))
        .map(|(i, l)| numbers::<3>(l, i + 1).and_then(|[x, y, z]| Point3::try_new(x, y, z)))
        .collect()
}

pub fn write_points2(points: &[Point2]) -> String {
    points.iter().map(|p| format!("{} {}\n", p.x, p.y)).collect()
}

pub fn write_points3(points: &[Point3]) -> String {
    points.iter().map(|p| format!("{} {} {}\n", p.x, p.y, p.z)).collect()
}

/// One integer per line, for the sorting workload.
pub fn read_sequence(text: &str) -> Result<Vec<i64>> {
    text.lines().enumerate().filter(|(_, l)| !skip(l)).map(|(i, l)| numbers::<1>(l, i + 1).map(|[v]| v)).collect()
}

pub fn write_sequence(seq: &[i64]) -> String {
    seq.iter().map(|v| format!("{v}\n")).collect()
}

fn chain_blocks<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Vec<Vec<Point2>>> {
    let mut chains = Vec::new();
    let mut cur = Vec::new();
    for (i, l) in lines {
        let t = l.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            if !cur.is_empty() {
                chains.push(std::mem::take(&mut cur));
            }
            continue;
        }
        let [x, y] = numbers::<2>(t, i + 1)?;
        cur.push(Point2::try_new(x, y)?);
    }
    if !cur.is_empty() {
        chains.push(cur);
    }
    Ok(chains)
}

pub fn read_chains(text: &str) -> Result<Vec<Vec<Point2>>> {
    chain_blocks(text.lines().enumerate())
}

pub fn write_chains(chains: &[Vec<Point2>]) -> String {
    chains.iter().map(|c| write_points2(c)).collect::<Vec<_>>().join("\n")
}

/// Query point and chains (boundary first) of a scene file.
pub fn read_scene(text: &str) -> Result<(Point2, Vec<Vec<Point2>>)> {
    let mut lines = text.lines().enumerate().skip_while(|(_, l)| skip(l));
    let (i, head) = lines.next().ok_or_else(|| Error::malformed("empty scene file"))?;
    let rest = head
        .trim()
        .strip_prefix("q:")
        .ok_or_else(|| Error::Parse { line: i + 1, msg: "scene must start with \"q: x y\"".into() })?;
    let [x, y] = numbers::<2>(rest, i + 1)?;
    let chains = chain_blocks(lines)?;
    if chains.is_empty() {
        return Err(Error::malformed("scene has no boundary"));
    }
    Ok((Point2::try_new(x, y)?, chains))
}

pub fn write_scene(q: Point2, chains: &[Vec<Point2>]) -> String {
    format!("q: {} {}\n\n{}", q.x, q.y, write_chains(chains))
}

pub fn read_certificate(text: &str) -> Result<RangePartition> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
}

pub fn write_certificate(part: &RangePartition) -> String {
    serde_json::to_string_pretty(part).expect("certificates serialize")
}

/// Contents of `instance.meta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub generator: String,
    pub seed: u64,
    pub n: usize,
    pub entropy_bound: f64,
    /// Name of the data file next to the metadata.
    pub data: String,
    pub certificate: Option<String>,
}

pub fn read_meta(text: &str) -> Result<InstanceMeta> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
}

pub fn write_meta(meta: &InstanceMeta) -> String {
    serde_json::to_string_pretty(meta).expect("metadata serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_round_trip() {
        let p = vec![Point2::new(1, -2), Point2::new(3, 4)];
        assert_eq!(read_points2(&write_points2(&p)).unwrap(), p);
        let q = vec![Point3::new(1, 2, 3)];
        assert_eq!(read_points3(&write_points3(&q)).unwrap(), q);
        assert_eq!(read_points2("# header\n\n5 6\n").unwrap(), vec![Point2::new(5, 6)]);
        assert_eq!(read_sequence(&write_sequence(&[3, -1, 2])).unwrap(), vec![3, -1, 2]);
    }

    #[test]
    fn bad_lines_name_their_number() {
        assert_eq!(read_points2("1 2\n3\n"), Err(Error::Parse { line: 2, msg: "expected 2 integers, found 1".into() }));
        assert!(matches!(read_points2("1 x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_points3("1 2 99999999999999\n"), Err(Error::CoordinateRange { .. })));
    }

    #[test]
    fn chains_and_scenes() {
        let chains = vec![vec![Point2::new(0, 0), Point2::new(1, 1)], vec![Point2::new(2, 0)]];
        assert_eq!(read_chains(&write_chains(&chains)).unwrap(), chains);
        assert_eq!(read_chains("0 0\n1 1\n\n\n2 0\n").unwrap(), chains);
        let text = write_scene(Point2::new(5, 5), &chains);
        assert_eq!(read_scene(&text).unwrap(), (Point2::new(5, 5), chains));
        assert!(read_scene("0 0\n").is_err());
    }
}
