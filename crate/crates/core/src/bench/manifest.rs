//! Tab-separated image-pair manifest:
//! `ref_path<TAB>test_path<TAB>angle_deg<TAB>tx<TAB>ty<TAB>scale<TAB>tag`.
//! Ground-truth fields may all be "NA" for rows not used in pose scoring.

use std::path::{Path, PathBuf};

use crate::{Error, Result};

/// Pair provenance tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairTag {
    Incremental,
    Absolute,
    Synthetic,
}

impl PairTag {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "incremental" => Some(Self::Incremental),
            "absolute" => Some(Self::Absolute),
            "synthetic" => Some(Self::Synthetic),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Incremental => "incremental",
            Self::Absolute => "absolute",
            Self::Synthetic => "synthetic",
        }
    }
}

/// Ground-truth pose parameters as written in a manifest row; the image
/// center completing a GroundTruth2D comes from the reference image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGt {
    pub angle_deg: f64,
    pub tx: f64,
    pub ty: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub ref_path: PathBuf,
    pub test_path: PathBuf,
    pub gt: Option<PairGt>,
    pub tag: PairTag,
}

pub type PairManifest = Vec<PairRow>;

fn parse_gt_field(line: usize, name: &str, v: &str) -> Result<Option<f64>> {
    if v == "NA" {
        return Ok(None);
    }
    v.parse().map(Some).map_err(|_| {
        Error::Data(format!("manifest line {line}: bad {name} value '{v}'"))
    })
}

/// Parse the manifest text; blank lines and '#' comment lines are skipped.
pub fn parse_manifest(text: &str) -> Result<PairManifest> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 7 {
            return Err(Error::Data(format!(
                "manifest line {lineno}: expected 7 tab-separated fields, got {}",
                fields.len()
            )));
        }
        let angle = parse_gt_field(lineno, "angle_deg", fields[2])?;
        let tx = parse_gt_field(lineno, "tx", fields[3])?;
        let ty = parse_gt_field(lineno, "ty", fields[4])?;
        let scale = parse_gt_field(lineno, "scale", fields[5])?;
        let gt = match (angle, tx, ty, scale) {
            (Some(angle_deg), Some(tx), Some(ty), Some(scale)) => Some(PairGt {
                angle_deg,
                tx,
                ty,
                scale,
            }),
            (None, None, None, None) => None,
            _ => {
                return Err(Error::Data(format!(
                    "manifest line {lineno}: ground-truth fields must be all set or all NA"
                )))
            }
        };
        let tag = PairTag::parse(fields[6]).ok_or_else(|| {
            Error::Data(format!("manifest line {lineno}: unknown tag '{}'", fields[6]))
        })?;
        rows.push(PairRow {
            ref_path: PathBuf::from(fields[0]),
            test_path: PathBuf::from(fields[1]),
            gt,
            tag,
        });
    }
    Ok(rows)
}

pub fn load_manifest(path: &Path) -> Result<PairManifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(&text)
}

/// Serialize rows back to the manifest format (used by synth-gen).
pub fn write_manifest(rows: &[PairRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let gt = match &r.gt {
            Some(g) => format!("{}\t{}\t{}\t{}", g.angle_deg, g.tx, g.ty, g.scale),
            None => "NA\tNA\tNA\tNA".to_string(),
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.ref_path.display(),
            r.test_path.display(),
            gt,
            r.tag.name()
        ));
    }
    out
}
