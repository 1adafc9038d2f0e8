//! Run configuration: a sectioned TOML file that fully determines a run.
//!
//! Every field has a default, so an empty file is valid. The resolved config
//! (including any value chosen at run time, such as the Julia gray cap) is
//! written next to each rendered image and can be fed back in unchanged.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{Catalogue, CodeError};
use crate::dynamics::{curve_sweep, CurvePoint, DynamicsError, JacobianMethod, DEFAULT_CLASS_TOL, DEFAULT_CONV_TOL, DEFAULT_EPS, DEFAULT_F_TARGET};
use crate::protocols::{Protocol, ProtocolError, TwirlMode};
use crate::render::{render_fatou, render_julia, render_speed_diff, with_workers, Frame, ImageFormat, RenderError, SlicePlane, DEFAULT_SPEED_REF};
use crate::states::{BlochVector, Family};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read '{path}': {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("cannot serialize config: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Code(CodeError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

impl From<CodeError> for ConfigError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Io { path, source } => ConfigError::Io { path: path.into(), source },
            other => ConfigError::Code(other),
        }
    }
}

impl ConfigError {
    pub fn is_io(&self) -> bool {
        matches!(self, ConfigError::Io { .. } | ConfigError::Render(RenderError::Io(_)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderKind {
    #[default]
    Fatou,
    Julia,
    Speed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JacobianChoice {
    #[default]
    Direct,
    Chain,
}

impl From<JacobianChoice> for JacobianMethod {
    fn from(c: JacobianChoice) -> Self {
        match c {
            JacobianChoice::Direct => JacobianMethod::Direct,
            JacobianChoice::Chain => JacobianMethod::Chain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolSection {
    pub name: String,
    /// Code catalogue file; the built-in catalogue when absent.
    pub catalogue: Option<PathBuf>,
    pub twirl: TwirlMode,
    /// Twirl family; the protocol's own family when absent.
    pub family: Option<Family>,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        Self { name: "five_qubit".into(), catalogue: None, twirl: TwirlMode::None, family: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlaneSection {
    pub origin: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub extent: f64,
    pub width: u32,
    pub height: u32,
}

impl Default for PlaneSection {
    fn default() -> Self {
        Self { origin: [0.0; 3], u: [1.0, 0.0, 0.0], v: [0.0, 1.0, 0.0], extent: 1.0, width: 256, height: 256 }
    }
}

impl PlaneSection {
    /// Replaces the axes and origin with a named preset, keeping extent and size.
    pub fn apply_preset(&mut self, name: &str) -> Result<(), ConfigError> {
        let p = SlicePlane::preset(name, self.extent.max(f64::MIN_POSITIVE), self.width.max(1), self.height.max(1))?;
        self.origin = p.origin().to_array();
        self.u = p.u_axis().to_array();
        self.v = p.v_axis().to_array();
        Ok(())
    }

    pub fn to_plane(&self) -> Result<SlicePlane, ConfigError> {
        Ok(SlicePlane::new(
            BlochVector::from_array(self.origin),
            BlochVector::from_array(self.u),
            BlochVector::from_array(self.v),
            self.extent,
            self.width,
            self.height,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IterationSection {
    /// Fixed step count for Fatou and Julia renders.
    pub m: u32,
    /// Step budget for `point` and speed maps.
    pub m_max: u32,
    pub eps: f64,
    pub conv_tol: f64,
    pub class_tol: f64,
    pub f_target: f64,
}

impl Default for IterationSection {
    fn default() -> Self {
        Self { m: 12, m_max: 30, eps: DEFAULT_EPS, conv_tol: DEFAULT_CONV_TOL, class_tol: DEFAULT_CLASS_TOL, f_target: DEFAULT_F_TARGET }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSection {
    pub kind: RenderKind,
    pub format: ImageFormat,
    /// Julia gray cap; the frame's 99th percentile when absent.
    pub julia_cap: Option<f64>,
    pub jacobian: JacobianChoice,
    pub speed_ref: f64,
}

impl Default for RenderSection {
    fn default() -> Self {
        Self { kind: RenderKind::Fatou, format: ImageFormat::Ppm, julia_cap: None, jacobian: JacobianChoice::Direct, speed_ref: DEFAULT_SPEED_REF }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveSection {
    /// Sweep family; the protocol's own family when absent.
    pub family: Option<Family>,
    pub f_lo: f64,
    pub f_hi: f64,
    pub samples: usize,
    /// One CSV per entry.
    pub m: Vec<u32>,
}

impl Default for CurveSection {
    fn default() -> Self {
        Self { family: None, f_lo: 0.5, f_hi: 1.0, samples: 201, m: vec![1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdSection {
    pub family: Option<Family>,
    pub f_lo: f64,
    pub f_hi: f64,
    pub m_probe: u32,
    pub iters: u32,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        Self { family: None, f_lo: 0.6, f_hi: 0.95, m_probe: 30, iters: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub protocol: ProtocolSection,
    pub plane: PlaneSection,
    pub iteration: IterationSection,
    pub render: RenderSection,
    pub curve: CurveSection,
    pub threshold: ThresholdSection,
    pub output: OutputSection,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        Ok(toml::to_string(self)?)
    }

    /// Checks numeric ranges; file references are checked by [`RunConfig::catalogue`].
    pub fn validate(&self) -> Result<(), ConfigError> {
        let it = &self.iteration;
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        if it.m == 0 || it.m_max == 0 {
            return bad("iteration.m and iteration.m_max must be at least 1".into());
        }
        for (name, v) in [("eps", it.eps), ("conv_tol", it.conv_tol), ("class_tol", it.class_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("iteration.{name} must be positive, got {v}"));
            }
        }
        if !(0.0..=1.0).contains(&it.f_target) {
            return bad(format!("iteration.f_target must lie in [0, 1], got {}", it.f_target));
        }
        if !(self.render.speed_ref > 0.0) {
            return bad(format!("render.speed_ref must be positive, got {}", self.render.speed_ref));
        }
        if let Some(c) = self.render.julia_cap {
            if !(c > 0.0 && c.is_finite()) {
                return bad(format!("render.julia_cap must be positive, got {c}"));
            }
        }
        let c = &self.curve;
        if c.samples < 2 || !(0.0 <= c.f_lo && c.f_lo < c.f_hi && c.f_hi <= 1.0) || c.m.is_empty() || c.m.contains(&0) {
            return bad("curve needs samples >= 2, 0 <= f_lo < f_hi <= 1 and nonzero m values".into());
        }
        let t = &self.threshold;
        if t.m_probe == 0 || !(0.0 <= t.f_lo && t.f_lo < t.f_hi && t.f_hi <= 1.0) {
            return bad("threshold needs m_probe >= 1 and 0 <= f_lo < f_hi <= 1".into());
        }
        self.plane.to_plane()?;
        Ok(())
    }

    pub fn catalogue(&self) -> Result<Catalogue, ConfigError> {
        match &self.protocol.catalogue {
            Some(path) => Ok(Catalogue::load(path)?),
            None => Ok(Catalogue::builtin()),
        }
    }

    /// Builds the configured protocol with its twirl applied.
    pub fn protocol(&self) -> Result<Protocol, ConfigError> {
        let cat = self.catalogue()?;
        let problems: Vec<String> = cat.entries.iter().flat_map(|e| e.validate()).collect();
        if !problems.is_empty() {
            return Err(ConfigError::Invalid(format!("catalogue failed validation: {}", problems.join("; "))));
        }
        let p = Protocol::catalogue(&self.protocol.name, &cat)?;
        let family = self.protocol.family.unwrap_or(p.family());
        Ok(p.with_twirl(self.protocol.twirl, family))
    }

    /// Renders the configured image. `workers` only changes the speed.
    pub fn render_frame(&self, workers: Option<usize>) -> Result<Frame, ConfigError> {
        self.validate()?;
        let protocol = self.protocol()?;
        let plane = self.plane.to_plane()?;
        let (it, r) = (&self.iteration, &self.render);
        let frame = with_workers(workers, || match r.kind {
            RenderKind::Fatou => render_fatou(&protocol, &plane, it.m),
            RenderKind::Julia => render_julia(&protocol, &plane, it.m, it.eps, r.julia_cap, r.jacobian.into()),
            RenderKind::Speed => render_speed_diff(&protocol, &plane, it.m_max, it.f_target, r.speed_ref),
        })??;
        Ok(frame)
    }

    /// One fidelity curve per configured step count.
    pub fn curves(&self) -> Result<Vec<(u32, Vec<CurvePoint>)>, ConfigError> {
        self.validate()?;
        let protocol = self.protocol()?;
        let c = &self.curve;
        let family = c.family.unwrap_or(protocol.family());
        c.m.iter()
            .map(|&m| Ok((m, curve_sweep(&protocol, family, c.f_lo, c.f_hi, c.samples, m)?)))
            .collect()
    }
}
