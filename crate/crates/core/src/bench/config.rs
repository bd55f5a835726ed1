//! Flat `key = value` run configuration for the benchmark CLI.

use std::path::Path;

use crate::detect::Detector;
use crate::describe::{DescriberKind, DEFAULT_PATTERN_SEED};
use crate::matchpose::RansacConfig;
use crate::metrics::MetricsConfig;
use crate::select::SelectorConfig;
use crate::synth::{default_sweep, TextureKind, TransformKind, TransformSpec};
use crate::{Error, Result};

/// Everything a benchmark run needs; every field has a default so an empty
/// config file is a valid run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub detectors: Vec<String>,
    pub descriptors: Vec<String>,
    pub selector: SelectorConfig,
    /// Keypoint budget applied to both images outside budget sweeps.
    pub budget: usize,
    /// Reference-feature budgets for the pose-eval sweep.
    pub budgets: Vec<usize>,
    pub ratio: f64,
    pub ransac: RansacConfig,
    pub metrics: MetricsConfig,
    pub sweep: Vec<TransformSpec>,
    pub textures: Vec<TextureKind>,
    pub image_size: usize,
    pub seed: u64,
    pub pattern_seed: u64,
    /// Worker threads; 0 means the rayon default.
    pub jobs: usize,
    /// Record wall-clock detection time. Off by default so reports are
    /// byte-identical across runs.
    pub measure_time: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            detectors: ["harris", "gftt", "fast", "censure", "dog"]
                .map(String::from)
                .to_vec(),
            descriptors: ["brief", "brief-steered", "latch", "gradhist"]
                .map(String::from)
                .to_vec(),
            selector: SelectorConfig::default(),
            budget: 1000,
            budgets: vec![1000],
            ratio: 0.7,
            ransac: RansacConfig::default(),
            metrics: MetricsConfig::default(),
            sweep: default_sweep(0),
            textures: TextureKind::ALL.to_vec(),
            image_size: 256,
            seed: 0,
            pattern_seed: DEFAULT_PATTERN_SEED,
            jobs: 0,
            measure_time: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{v}' for key '{key}'")))
}

fn parse_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse_sweep(v: &str) -> Result<Vec<TransformSpec>> {
    let mut specs = Vec::new();
    for (i, item) in parse_list(v).iter().enumerate() {
        let (kind, param) = item.split_once(':').ok_or_else(|| {
            Error::Config(format!("sweep entry '{item}' must be kind:parameter"))
        })?;
        let kind = match kind.trim() {
            "rotation" => TransformKind::Rotation,
            "translation" => TransformKind::Translation,
            "noise" => TransformKind::Noise,
            "gamma" => TransformKind::Gamma,
            other => return Err(Error::Config(format!("unknown transform '{other}'"))),
        };
        let spec = TransformSpec {
            kind,
            parameter: parse_num("sweep", param)?,
            seed: i as u64 + 1,
        };
        spec.validate()
            .map_err(|e| Error::Config(format!("sweep entry '{item}': {e}")))?;
        specs.push(spec);
    }
    Ok(specs)
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Parse a flat `key = value` document; '#' starts a comment, list
    /// values are comma-separated, unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "detectors" => cfg.detectors = parse_list(value),
                "descriptors" => cfg.descriptors = parse_list(value),
                "selector" => cfg.selector = SelectorConfig::by_name(value)?,
                "budget" => cfg.budget = parse_num(key, value)?,
                "budgets" => {
                    cfg.budgets = parse_list(value)
                        .iter()
                        .map(|s| parse_num(key, s))
                        .collect::<Result<_>>()?
                }
                "ratio" => cfg.ratio = parse_num(key, value)?,
                "ransac_iterations" => cfg.ransac.iterations = parse_num(key, value)?,
                "ransac_threshold" => cfg.ransac.inlier_threshold = parse_num(key, value)?,
                "ransac_min_inliers" => cfg.ransac.min_inliers = parse_num(key, value)?,
                "ransac_with_scale" => cfg.ransac.with_scale = parse_num(key, value)?,
                "scale_min" => cfg.ransac.scale_bounds.0 = parse_num(key, value)?,
                "scale_max" => cfg.ransac.scale_bounds.1 = parse_num(key, value)?,
                "iou_threshold" => cfg.metrics.iou_threshold = parse_num(key, value)?,
                "n_min_keypoints" => cfg.metrics.n_min_keypoints = parse_num(key, value)?,
                "pos_threshold" => cfg.metrics.pos_threshold = parse_num(key, value)?,
                "ang_threshold" => cfg.metrics.ang_threshold = parse_num(key, value)?,
                "sweep" => cfg.sweep = parse_sweep(value)?,
                "textures" => {
                    cfg.textures = parse_list(value)
                        .iter()
                        .map(|s| {
                            TextureKind::parse(s)
                                .map_err(|_| Error::Config(format!("unknown texture '{s}'")))
                        })
                        .collect::<Result<_>>()?
                }
                "image_size" => cfg.image_size = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "pattern_seed" => cfg.pattern_seed = parse_num(key, value)?,
                "jobs" => cfg.jobs = parse_num(key, value)?,
                "measure_time" => cfg.measure_time = parse_num(key, value)?,
                other => return Err(Error::Config(format!("unknown config key '{other}'"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget < 1 {
            return Err(Error::Config("budget must be >= 1".into()));
        }
        if self.budgets.is_empty() || self.budgets.iter().any(|&b| b < 1) {
            return Err(Error::Config("budgets must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.ratio) {
            return Err(Error::Config(format!("ratio {} out of (0, 1)", self.ratio)));
        }
        if self.detectors.is_empty() || self.descriptors.is_empty() {
            return Err(Error::Config("need at least one detector and descriptor".into()));
        }
        if self.textures.is_empty() {
            return Err(Error::Config("need at least one texture".into()));
        }
        if self.image_size < 64 {
            return Err(Error::Config("image_size must be >= 64".into()));
        }
        for name in &self.detectors {
            Detector::by_name(name)
                .map_err(|_| Error::Config(format!("unknown detector '{name}'")))?;
        }
        for name in &self.descriptors {
            DescriberKind::by_name(name)
                .map_err(|_| Error::Config(format!("unknown descriptor '{name}'")))?;
        }
        self.ransac
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        for spec in &self.sweep {
            spec.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// Stable hash of the fields that determine feature extraction, used to
    /// validate cached features.
    pub fn feature_hash(&self, detector: &str, descriptor: &str, budget: usize) -> u64 {
        let key = format!(
            "{detector}|{descriptor}|{}|{budget}|{}|{}|{}",
            self.selector.name(),
            self.image_size,
            self.seed,
            self.pattern_seed,
        );
        fnv1a(key.as_bytes())
    }
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg.budget, 1000);
        assert_eq!(cfg.ratio, 0.7);
        assert_eq!(cfg.detectors.len(), 5);
        assert_eq!(cfg.sweep.len(), 18);
        assert!(!cfg.measure_time);
    }

    #[test]
    fn parses_keys_and_comments() {
        let cfg = RunConfig::parse(
            "# comment\n\
             detectors = dog, censure  # trailing comment\n\
             budget = 500\n\
             budgets = 10, 100, 1000\n\
             ratio = 0.8\n\
             sweep = rotation:90, noise:10\n\
             textures = blobs\n\
             measure_time = true\n",
        )
        .unwrap();
        assert_eq!(cfg.detectors, vec!["dog", "censure"]);
        assert_eq!(cfg.budget, 500);
        assert_eq!(cfg.budgets, vec![10, 100, 1000]);
        assert_eq!(cfg.ratio, 0.8);
        assert_eq!(cfg.sweep.len(), 2);
        assert_eq!(cfg.textures, vec![TextureKind::Blobs]);
        assert!(cfg.measure_time);
    }

    #[test]
    fn rejects_unknown_keys_and_names() {
        assert!(RunConfig::parse("bogus = 1").is_err());
        assert!(RunConfig::parse("detectors = sift9000").is_err());
        assert!(RunConfig::parse("descriptors = vgg").is_err());
        assert!(RunConfig::parse("sweep = rotation:999").is_err());
        assert!(RunConfig::parse("budget = 0").is_err());
        assert!(RunConfig::parse("ratio = 1.5").is_err());
        assert!(RunConfig::parse("textures = marble").is_err());
        assert!(RunConfig::parse("no_equals_here").is_err());
    }

    #[test]
    fn feature_hash_distinguishes_configs() {
        let cfg = RunConfig::default();
        let a = cfg.feature_hash("dog", "brief", 1000);
        let b = cfg.feature_hash("dog", "brief", 500);
        let c = cfg.feature_hash("dog", "latch", 1000);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, cfg.feature_hash("dog", "brief", 1000));
    }
}
