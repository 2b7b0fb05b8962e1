//! Run configuration: one JSON document that fully determines a run.
//!
//! Surfaces and spine curves get serializable mirrors of the library types
//! here, since the library enums also admit closure-backed variants that
//! cannot travel through a config file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use tubetype::geometry::{CurveSpec, SurfaceSpec};
use tubetype::EvalMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveConfig {
    Circle { radius: f64 },
    Helix { radius: f64, pitch: f64 },
}

impl CurveConfig {
    pub fn to_spec(&self) -> CurveSpec {
        match *self {
            CurveConfig::Circle { radius } => CurveSpec::Circle { radius },
            CurveConfig::Helix { radius, pitch } => CurveSpec::Helix { radius, pitch },
        }
    }

    /// Largest curvature along the spine, which bounds admissible tube radii.
    fn max_curvature(&self) -> f64 {
        match *self {
            CurveConfig::Circle { radius } => 1.0 / radius,
            CurveConfig::Helix { radius, pitch } => radius / (radius * radius + pitch * pitch),
        }
    }

    fn validate(&self) -> Result<(), String> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        match *self {
            CurveConfig::Circle { radius } if !ok(radius) => {
                Err(format!("circle radius must be positive, got {radius}"))
            }
            CurveConfig::Helix { radius, pitch } if !ok(radius) || !pitch.is_finite() => Err(
                format!("helix needs positive radius and finite pitch, got ({radius}, {pitch})"),
            ),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Sphere {
        radius: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    Catenoid {
        c: f64,
    },
    AnchorRing {
        a: f64,
        r: f64,
    },
    Tube {
        curve: CurveConfig,
        radius: f64,
    },
}

impl SurfaceConfig {
    pub fn to_spec(&self) -> SurfaceSpec {
        match self {
            SurfaceConfig::Sphere { radius, center } => SurfaceSpec::Sphere {
                radius: *radius,
                center: *center,
            },
            SurfaceConfig::Catenoid { c } => SurfaceSpec::Catenoid { c: *c },
            SurfaceConfig::AnchorRing { a, r } => SurfaceSpec::AnchorRing { a: *a, r: *r },
            SurfaceConfig::Tube { curve, radius } => SurfaceSpec::Tube {
                curve: curve.to_spec(),
                radius: *radius,
            },
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        match self {
            SurfaceConfig::Sphere { radius, center } => {
                if !ok(*radius) {
                    return Err(format!("sphere radius must be positive, got {radius}"));
                }
                if center.iter().any(|c| !c.is_finite()) {
                    return Err("sphere center must be finite".into());
                }
            }
            SurfaceConfig::Catenoid { c } => {
                if !ok(*c) {
                    return Err(format!("catenoid waist must be positive, got {c}"));
                }
            }
            SurfaceConfig::AnchorRing { a, r } => {
                if !ok(*a) || !ok(*r) || r >= a {
                    return Err(format!("anchor ring needs 0 < r < a, got a = {a}, r = {r}"));
                }
            }
            SurfaceConfig::Tube { curve, radius } => {
                curve.validate()?;
                if !ok(*radius) {
                    return Err(format!("tube radius must be positive, got {radius}"));
                }
                let bound = 1.0 / curve.max_curvature();
                if *radius >= bound {
                    return Err(format!(
                        "tube radius {radius} must stay below 1/max curvature = {bound}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Grid sizes that resolve each family's default domain well enough for
    /// the identity suite. Tubes put the fine axis along the profile angle,
    /// where the operator's coefficients vary fastest.
    pub fn default_grid(&self) -> [usize; 2] {
        match self {
            SurfaceConfig::Sphere { .. } | SurfaceConfig::Catenoid { .. } => [128, 128],
            SurfaceConfig::AnchorRing { .. } => [384, 128],
            SurfaceConfig::Tube { .. } => [256, 2048],
        }
    }

    /// Default mask width. The operator's coefficients carry inverse powers
    /// of the masked cosine, and on tubes both parameter directions feel the
    /// pole, so they get a wider berth than the anchor ring.
    pub fn default_exclusion(&self) -> f64 {
        match self {
            SurfaceConfig::Tube { .. } => 0.3,
            SurfaceConfig::AnchorRing { .. } => 0.2,
            _ => 0.0,
        }
    }
}

/// Named shorthands accepted wherever a surface argument is, to keep smoke
/// runs typeable.
pub fn surface_shorthand(name: &str) -> Option<SurfaceConfig> {
    match name.replace('_', "-").as_str() {
        "sphere" => Some(SurfaceConfig::Sphere {
            radius: 1.0,
            center: [0.0; 3],
        }),
        "catenoid" => Some(SurfaceConfig::Catenoid { c: 1.0 }),
        "anchor-ring" => Some(SurfaceConfig::AnchorRing { a: 2.0, r: 1.0 }),
        "circle-tube" => Some(SurfaceConfig::Tube {
            curve: CurveConfig::Circle { radius: 2.0 },
            radius: 0.5,
        }),
        "helix-tube" => Some(SurfaceConfig::Tube {
            curve: CurveConfig::Helix {
                radius: 1.0,
                pitch: 1.0,
            },
            radius: 0.5,
        }),
        _ => None,
    }
}

/// Resolve a surface argument: a shorthand name, inline JSON, or a path to
/// a JSON file holding one surface object.
pub fn parse_surface_arg(arg: &str) -> Result<SurfaceConfig, String> {
    if let Some(cfg) = surface_shorthand(arg) {
        return Ok(cfg);
    }
    if arg.trim_start().starts_with('{') {
        return serde_json::from_str(arg).map_err(|e| format!("inline surface JSON: {e}"));
    }
    let path = Path::new(arg);
    if path.exists() {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("reading surface file {}: {e}", path.display()))?;
        return serde_json::from_str(&text)
            .map_err(|e| format!("surface file {}: {e}", path.display()));
    }
    Err(format!(
        "unknown surface '{arg}': expected sphere, catenoid, anchor-ring, circle-tube, \
         helix-tube, inline JSON, or a path to a JSON file"
    ))
}

/// Residual tolerances for the numeric checks, each in (0, 1). The form
/// regressions carry their own fixed tolerance and are not listed here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub mean_normal: f64,
    pub position_identity: f64,
    pub gauss_eigen: f64,
    pub position_harmonic: f64,
    pub crosscheck: f64,
    pub finite_type: f64,
    pub infinite_type: f64,
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            mean_normal: 1e-5,
            position_identity: 1e-4,
            gauss_eigen: 1e-5,
            position_harmonic: 1e-5,
            crosscheck: 1e-5,
            finite_type: 1e-4,
            infinite_type: 1e-2,
            rank: 1e-8,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), String> {
        let entries = [
            ("mean_normal", self.mean_normal),
            ("position_identity", self.position_identity),
            ("gauss_eigen", self.gauss_eigen),
            ("position_harmonic", self.position_harmonic),
            ("crosscheck", self.crosscheck),
            ("finite_type", self.finite_type),
            ("infinite_type", self.infinite_type),
            ("rank", self.rank),
        ];
        for (name, value) in entries {
            if !(value > 0.0 && value < 1.0) {
                return Err(format!("tolerance {name} must lie in (0, 1), got {value}"));
            }
        }
        if self.finite_type >= self.infinite_type {
            return Err(format!(
                "finite_type tolerance {} must be below infinite_type tolerance {}",
                self.finite_type, self.infinite_type
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub surface: Option<SurfaceConfig>,
    /// `[n_u, n_v]`; omitted means the surface family's default.
    pub grid: Option<[usize; 2]>,
    /// Valid samples keep `|cos phi| >= exclusion` on tubes (`|cos t|` on the
    /// anchor ring), masking the operator's poles; omitted means the surface
    /// family's default.
    pub exclusion: Option<f64>,
    /// Deepest numeric iterate requested from the grid engine.
    pub k_max: usize,
    /// Order of the exact anchor-ring certificate.
    pub m_max: u32,
    /// Order of the exact tube certificate.
    pub lambda_max: u32,
    /// Random admissible points drawn by the cross-checks and regressions.
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub sequential: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            surface: None,
            grid: None,
            exclusion: None,
            k_max: 3,
            m_max: 10,
            lambda_max: 3,
            samples: 100,
            seed: 17,
            tolerances: Tolerances::default(),
            out: None,
            format: Format::Json,
            sequential: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("reading config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        if let Some(surface) = &self.surface {
            surface.validate()?;
        }
        if let Some([nu, nv]) = self.grid {
            if nu < 8 || nv < 8 {
                return Err(format!(
                    "grid {nu}x{nv} too small; both axes need at least 8"
                ));
            }
        }
        if let Some(exclusion) = self.exclusion {
            if !(0.0..1.0).contains(&exclusion) {
                return Err(format!("exclusion must lie in [0, 1), got {exclusion}"));
            }
        }
        if self.k_max == 0 {
            return Err("k_max must be positive".into());
        }
        if self.m_max == 0 {
            return Err("m_max must be positive".into());
        }
        if self.lambda_max == 0 {
            return Err("lambda_max must be positive".into());
        }
        if self.samples == 0 {
            return Err("samples must be positive".into());
        }
        self.tolerances.validate()
    }

    pub fn mode(&self) -> EvalMode {
        if self.sequential {
            EvalMode::Sequential
        } else {
            EvalMode::Parallel
        }
    }

    /// The grid actually used: an explicit request, else the surface default.
    pub fn grid_for(&self, surface: &SurfaceConfig) -> [usize; 2] {
        self.grid.unwrap_or_else(|| surface.default_grid())
    }

    pub fn exclusion_for(&self, surface: &SurfaceConfig) -> f64 {
        self.exclusion
            .unwrap_or_else(|| surface.default_exclusion())
    }

    /// Pin the grid and exclusion to their effective values so the report's
    /// config echo alone reproduces the run.
    pub fn resolve(&mut self) {
        if let Some(surface) = self.surface.clone() {
            self.grid = Some(self.grid_for(&surface));
            self.exclusion = Some(self.exclusion_for(&surface));
        }
    }
}
