//! On-disk layout: `manifest.json` plus `tiles/{z}/{x}/{y}.json`, with every
//! number printed to 17 significant digits. Absent tiles are empty.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use super::{stats_from_counts, LabelOwner, PyramidStats, TileData, TilePyramid};
use crate::geometry::{Point, Rect};
use crate::graph::LaidOutGraph;

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{} not found", path.display())]
    Missing { path: PathBuf },
    #[error("corrupt manifest {}: {message}", path.display())]
    CorruptManifest { path: PathBuf, message: String },
    #[error("corrupt tile {}: {message}", path.display())]
    CorruptTile { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `%.17g`-style formatting: shortest of fixed and exponent notation with
/// 17 significant digits, trailing zeros removed. Always round-trips.
pub fn format_number(v: f64) -> String {
    assert!(v.is_finite(), "non-finite number in output");
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if !(-5..17).contains(&exp) {
        let m = trim(format!("{}.{}", &digits[..1], &digits[1..]));
        return format!("{sign}{m}e{exp}");
    }
    let body = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{}", trim(body))
}

/// A number written with [`format_number`].
#[derive(Debug, Clone, Copy)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_number(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn pt(p: Point) -> [Num; 2] {
    [Num(p.x), Num(p.y)]
}

fn rect(r: &Rect) -> [Num; 4] {
    [Num(r.min.x), Num(r.min.y), Num(r.max.x), Num(r.max.y)]
}

#[derive(Serialize)]
struct NodeJson<'a> {
    id: &'a str,
    #[serde(rename = "box")]
    bbox: [Num; 4],
    scale: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClipJson<'a> {
    path: Vec<[Num; 2]>,
    edges: Vec<[&'a str; 2]>,
    edge_index: &'a [usize],
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LabelJson<'a> {
    text: &'a str,
    anchor: [Num; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    node: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge: Option<[&'a str; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_index: Option<usize>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ArrowJson<'a> {
    tip: [Num; 2],
    dir: [Num; 2],
    edge: [&'a str; 2],
    edge_index: usize,
}

#[derive(Serialize)]
struct TileJson<'a> {
    nodes: Vec<NodeJson<'a>>,
    clips: Vec<ClipJson<'a>>,
    labels: Vec<LabelJson<'a>>,
    arrowheads: Vec<ArrowJson<'a>>,
}

pub fn tile_json(g: &LaidOutGraph, tile: &TileData) -> String {
    let pair = |e: usize| -> [&str; 2] {
        let (s, t) = g.edge_ids(e);
        [s, t]
    };
    let doc = TileJson {
        nodes: tile
            .nodes
            .iter()
            .map(|n| NodeJson {
                id: &g.nodes[n.node].id,
                bbox: rect(&n.bbox),
                scale: Num(n.scale),
                label: g.nodes[n.node].label.as_deref(),
            })
            .collect(),
        clips: tile
            .clips
            .iter()
            .map(|c| ClipJson {
                path: c.path.iter().map(|&p| pt(p)).collect(),
                edges: c.edges.iter().map(|&e| pair(e)).collect(),
                edge_index: &c.edges,
            })
            .collect(),
        labels: tile
            .labels
            .iter()
            .map(|l| match l.owner {
                LabelOwner::Node(v) => LabelJson {
                    text: g.nodes[v].label.as_deref().unwrap_or(&g.nodes[v].id),
                    anchor: pt(l.anchor),
                    node: Some(&g.nodes[v].id),
                    edge: None,
                    edge_index: None,
                },
                LabelOwner::Edge(e) => LabelJson {
                    text: g.edges[e].label.as_deref().unwrap_or(""),
                    anchor: pt(l.anchor),
                    node: None,
                    edge: Some(pair(e)),
                    edge_index: Some(e),
                },
            })
            .collect(),
        arrowheads: tile
            .arrowheads
            .iter()
            .map(|a| ArrowJson {
                tip: pt(a.tip),
                dir: pt(a.dir),
                edge: pair(a.edge),
                edge_index: a.edge,
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("tile serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCounts {
    pub nodes: usize,
    pub edges: usize,
}

/// Parsed `manifest.json`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub root_rect: [f64; 4],
    pub levels: usize,
    pub capacity: usize,
    pub graph: GraphCounts,
    pub stats: PyramidStats,
    pub y_axis: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ManifestJson<'a> {
    root_rect: [Num; 4],
    levels: usize,
    capacity: usize,
    graph: GraphCounts,
    stats: &'a PyramidStats,
    y_axis: &'static str,
    stop: super::StopReason,
    tile_side: Vec<Num>,
}

pub fn manifest_json(g: &LaidOutGraph, p: &TilePyramid) -> String {
    let doc = ManifestJson {
        root_rect: rect(&p.grid.root()),
        levels: p.levels.len(),
        capacity: p.capacity,
        graph: GraphCounts {
            nodes: g.nodes.len(),
            edges: g.edges.len(),
        },
        stats: &super::pyramid_stats(p),
        y_axis: "up",
        stop: p.stop,
        tile_side: (0..p.levels.len() as u32).map(|z| Num(p.grid.tile_side(z))).collect(),
    };
    serde_json::to_string(&doc).expect("manifest serializes")
}

/// Number of files written.
pub fn write_pyramid(dir: &Path, g: &LaidOutGraph, p: &TilePyramid) -> Result<usize, OutputError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let tiles_dir = dir.join("tiles");
    if tiles_dir.exists() {
        fs::remove_dir_all(&tiles_dir).map_err(io_err(&tiles_dir))?;
    }
    let mut written = 0;
    for level in &p.levels {
        for (&(x, y), tile) in &level.tiles {
            let col = tiles_dir.join(level.z.to_string()).join(x.to_string());
            fs::create_dir_all(&col).map_err(io_err(&col))?;
            let path = col.join(format!("{y}.json"));
            fs::write(&path, tile_json(g, tile)).map_err(io_err(&path))?;
            written += 1;
        }
    }
    let path = dir.join("manifest.json");
    fs::write(&path, manifest_json(g, p)).map_err(io_err(&path))?;
    Ok(written + 1)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest, OutputError> {
    let path = dir.join("manifest.json");
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(OutputError::Missing { path }),
        Err(e) => return Err(io_err(&path)(e)),
    };
    serde_json::from_slice(&bytes).map_err(|e| OutputError::CorruptManifest {
        path,
        message: e.to_string(),
    })
}

/// Element count of one serialized tile.
pub fn tile_element_count(path: &Path) -> Result<usize, OutputError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let corrupt = |message: String| OutputError::CorruptTile {
        path: path.to_path_buf(),
        message,
    };
    let doc: serde_json::Value = serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
    let mut count = 0;
    for key in ["nodes", "clips", "labels", "arrowheads"] {
        match doc.get(key).and_then(|v| v.as_array()) {
            Some(items) => count += items.len(),
            None => return Err(corrupt(format!("missing array {key:?}"))),
        }
    }
    Ok(count)
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>, OutputError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        out.push(entry.map_err(io_err(dir))?.path());
    }
    out.sort();
    Ok(out)
}

fn index_of(path: &Path, stem: bool, limit: u64) -> Result<u32, OutputError> {
    let name = if stem { path.file_stem() } else { path.file_name() };
    name.and_then(|n| n.to_str())
        .and_then(|n| n.parse::<u32>().ok())
        .filter(|&k| (k as u64) < limit)
        .ok_or_else(|| OutputError::CorruptTile {
            path: path.to_path_buf(),
            message: "unexpected tile path".into(),
        })
}

/// Stats recomputed from the files of a written pyramid.
pub fn read_stats(dir: &Path) -> Result<(Manifest, PyramidStats), OutputError> {
    let manifest = read_manifest(dir)?;
    let tiles = dir.join("tiles");
    let mut per_level = vec![Vec::new(); manifest.levels];
    for (z, counts) in per_level.iter_mut().enumerate() {
        let level_dir = tiles.join(z.to_string());
        if !level_dir.is_dir() {
            continue;
        }
        let limit = 1u64 << z.min(63);
        for col in sorted_entries(&level_dir)? {
            index_of(&col, false, limit)?;
            for file in sorted_entries(&col)? {
                if file.extension().and_then(|e| e.to_str()) != Some("json") {
                    return Err(OutputError::CorruptTile {
                        path: file,
                        message: "not a tile file".into(),
                    });
                }
                index_of(&file, true, limit)?;
                counts.push(tile_element_count(&file)?);
            }
        }
    }
    Ok((manifest, stats_from_counts(&per_level)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(0.1), "0.10000000000000001");
        assert_eq!(format_number(1234.5), "1234.5");
        assert_eq!(format_number(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_number(1e20), "1e20");
        assert_eq!(format_number(0.00012), "0.00012");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -7.25e-12, 6.02e23, 123456789.123, f64::MAX, f64::MIN_POSITIVE] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
    }
}
