//! Rendering of planar Bloch-ball slices: Fatou colour maps, Julia grayscale
//! sketches and twirl/no-twirl speed maps.
//!
//! Every pixel is a pure function of its centre coordinate, and rows are
//! filled in parallel into disjoint slices of one buffer, so output bytes do
//! not depend on the thread count.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{iterate_fixed, jacobian, speed_maps, JacobianMethod};
use crate::protocols::Protocol;
use crate::states::{color_of, BlochVector};

/// Default speed difference that saturates a speed-map pixel.
pub const DEFAULT_SPEED_REF: f64 = 5.0;
/// Percentile of finite Julia norms used as the default gray cap.
pub const JULIA_CAP_PERCENTILE: f64 = 0.99;

const BLACK: [u8; 3] = [0, 0, 0];
const WHITE: [u8; 3] = [255, 255, 255];
const ORTHO_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("invalid plane: {0}")]
    Plane(String),
    #[error("invalid render parameter: {0}")]
    Parameter(String),
    #[error("could not build worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("png encoding failed: {0}")]
    Png(#[from] image::ImageError),
}

/// A rectangle of Bloch space sampled at pixel centres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePlane {
    origin: BlochVector,
    u: BlochVector,
    v: BlochVector,
    half_extent: f64,
    width: u32,
    height: u32,
}

impl SlicePlane {
    pub fn new(
        origin: BlochVector,
        u: BlochVector,
        v: BlochVector,
        half_extent: f64,
        width: u32,
        height: u32,
    ) -> Result<Self, RenderError> {
        if (u.norm() - 1.0).abs() > ORTHO_TOL || (v.norm() - 1.0).abs() > ORTHO_TOL {
            return Err(RenderError::Plane(format!("axes must be unit vectors, got |u| = {}, |v| = {}", u.norm(), v.norm())));
        }
        if u.dot(v).abs() > ORTHO_TOL {
            return Err(RenderError::Plane(format!("axes must be orthogonal, u·v = {}", u.dot(v))));
        }
        if !(half_extent > 0.0 && half_extent.is_finite()) {
            return Err(RenderError::Plane(format!("extent must be positive, got {half_extent}")));
        }
        if width == 0 || height == 0 {
            return Err(RenderError::Plane(format!("image size must be nonzero, got {width}x{height}")));
        }
        if !origin.is_finite() {
            return Err(RenderError::Plane("origin must be finite".into()));
        }
        Ok(Self { origin, u, v, half_extent, width, height })
    }

    /// Named axis-aligned planes through the centre: `z0` (x right, y up),
    /// `y0` (x, z), `x0` (y, z) and `diag` ((1,1,0)/√2, z).
    pub fn preset(name: &str, extent: f64, width: u32, height: u32) -> Result<Self, RenderError> {
        let x = BlochVector::new(1.0, 0.0, 0.0);
        let y = BlochVector::new(0.0, 1.0, 0.0);
        let z = BlochVector::new(0.0, 0.0, 1.0);
        let d = BlochVector::new(1.0, 1.0, 0.0).normalized();
        let (u, v) = match name {
            "z0" => (x, y),
            "y0" => (x, z),
            "x0" => (y, z),
            "diag" => (d, z),
            other => return Err(RenderError::Plane(format!("unknown plane preset '{other}' (expected z0, y0, x0 or diag)"))),
        };
        Self::new(BlochVector::ORIGIN, u, v, extent, width, height)
    }

    pub fn origin(&self) -> BlochVector {
        self.origin
    }

    pub fn u_axis(&self) -> BlochVector {
        self.u
    }

    pub fn v_axis(&self) -> BlochVector {
        self.v
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Centre of pixel `(i, j)`, with `j` counted upward from the `−v` edge.
    pub fn point(&self, i: u32, j: u32) -> BlochVector {
        let s = ((2 * i + 1) as f64 / self.width as f64 - 1.0) * self.half_extent;
        let t = ((2 * j + 1) as f64 / self.height as f64 - 1.0) * self.half_extent;
        self.origin + self.u * s + self.v * t
    }

    /// Centre of the pixel at image column `col` and row `row` (row 0 at the top).
    pub fn pixel_center(&self, col: u32, row: u32) -> BlochVector {
        self.point(col, self.height - 1 - row)
    }
}

/// Row-major RGB bytes, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: u32, height: u32) -> Self {
        Self { width, height, data: vec![0; 3 * width as usize * height as usize] }
    }

    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Option<Self> {
        (data.len() == 3 * width as usize * height as usize).then_some(Self { width, height, data })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, col: u32, row: u32) -> [u8; 3] {
        let k = 3 * (row as usize * self.width as usize + col as usize);
        [self.data[k], self.data[k + 1], self.data[k + 2]]
    }

    pub fn set_pixel(&mut self, col: u32, row: u32, rgb: [u8; 3]) {
        let k = 3 * (row as usize * self.width as usize + col as usize);
        self.data[k..k + 3].copy_from_slice(&rgb);
    }

    /// Binary PPM (P6) encoding.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    #[default]
    Ppm,
    Png,
}

impl ImageFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ImageFormat::Ppm => "ppm",
            ImageFormat::Png => "png",
        }
    }

    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension().and_then(|e| e.to_str()).and_then(|e| e.to_ascii_lowercase().parse().ok())
    }
}

impl fmt::Display for ImageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImageFormat {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ppm" => Ok(ImageFormat::Ppm),
            "png" => Ok(ImageFormat::Png),
            other => Err(RenderError::Parameter(format!("unknown image format '{other}' (expected ppm or png)"))),
        }
    }
}

/// A rendered frame with per-pixel bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub image: ImageBuffer,
    /// Pixels outside the unit ball.
    pub outside: usize,
    /// In-ball pixels whose computation hit a zero-probability step.
    pub failed: usize,
    /// Gray cap actually used (Julia frames only).
    pub julia_cap: Option<f64>,
}

impl Frame {
    pub fn inside(&self) -> usize {
        self.image.width as usize * self.image.height as usize - self.outside
    }

    /// True when every in-ball pixel failed.
    pub fn is_degenerate(&self) -> bool {
        self.inside() > 0 && self.failed == self.inside()
    }
}

enum Pixel<T> {
    Outside,
    Failed,
    Value(T),
}

fn sample<T, F>(plane: &SlicePlane, f: F) -> Vec<Pixel<T>>
where
    T: Send,
    F: Fn(BlochVector) -> Option<T> + Sync,
{
    let (w, h) = (plane.width, plane.height);
    (0..h)
        .into_par_iter()
        .flat_map_iter(|row| {
            let f = &f;
            (0..w).map(move |col| {
                let r = plane.pixel_center(col, row);
                if !r.is_physical() {
                    Pixel::Outside
                } else {
                    f(r).map_or(Pixel::Failed, Pixel::Value)
                }
            })
        })
        .collect()
}

fn paint<T>(plane: &SlicePlane, pixels: &[Pixel<T>], colour: impl Fn(&T) -> [u8; 3] + Sync) -> (ImageBuffer, usize, usize)
where
    T: Sync,
{
    let mut image = ImageBuffer::new(plane.width, plane.height);
    image.data.par_chunks_mut(3).zip(pixels.par_iter()).for_each(|(px, p)| {
        let rgb = match p {
            Pixel::Value(v) => colour(v),
            _ => BLACK,
        };
        px.copy_from_slice(&rgb);
    });
    let outside = pixels.iter().filter(|p| matches!(p, Pixel::Outside)).count();
    let failed = pixels.iter().filter(|p| matches!(p, Pixel::Failed)).count();
    (image, outside, failed)
}

/// Colours each pixel by the read-out state after `m` steps.
pub fn render_fatou(p: &Protocol, plane: &SlicePlane, m: u32) -> Result<Frame, RenderError> {
    if m == 0 {
        return Err(RenderError::Parameter("m must be at least 1".into()));
    }
    let pixels = sample(plane, |r| iterate_fixed(p, r, m).ok().map(|out| color_of(p.readout(out)).unwrap_or(BLACK)));
    let (image, outside, failed) = paint(plane, &pixels, |&c| c);
    Ok(Frame { image, outside, failed, julia_cap: None })
}

/// Gray byte for Jacobian norm `norm` under cap `cap` (dark = large norm).
pub fn julia_gray(norm: f64, cap: f64) -> u8 {
    let g = 1.0 - (norm.ln_1p() / cap.ln_1p()).min(1.0);
    (255.0 * g + 0.5).floor() as u8
}

/// Nearest-rank percentile of `values`, which must be non-empty.
pub fn percentile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = (q * v.len() as f64).ceil() as usize;
    v[rank.clamp(1, v.len()) - 1]
}

/// Grayscale sketch of `‖∇D^m‖` using the direct finite-difference Jacobian.
/// Without an explicit `scale_cap` the 99th percentile of the frame is used.
pub fn render_julia(
    p: &Protocol,
    plane: &SlicePlane,
    m: u32,
    eps: f64,
    scale_cap: Option<f64>,
    method: JacobianMethod,
) -> Result<Frame, RenderError> {
    if m == 0 {
        return Err(RenderError::Parameter("m must be at least 1".into()));
    }
    if !(eps > 0.0) {
        return Err(RenderError::Parameter(format!("eps must be positive, got {eps}")));
    }
    if let Some(cap) = scale_cap {
        if !(cap > 0.0 && cap.is_finite()) {
            return Err(RenderError::Parameter(format!("julia cap must be positive, got {cap}")));
        }
    }
    let pixels = sample(plane, |r| jacobian(p, r, m, eps, method).ok().and_then(|rep| rep.norm).filter(|n| n.is_finite()));
    let cap = scale_cap.unwrap_or_else(|| {
        let norms: Vec<f64> = pixels
            .iter()
            .filter_map(|p| match p {
                Pixel::Value(n) => Some(*n),
                _ => None,
            })
            .collect();
        if norms.is_empty() {
            return 1.0;
        }
        let c = percentile(&norms, JULIA_CAP_PERCENTILE);
        if c > 0.0 {
            c
        } else {
            1.0
        }
    });
    let (image, outside, failed) = paint(plane, &pixels, |&n| {
        let g = julia_gray(n, cap);
        [g, g, g]
    });
    Ok(Frame { image, outside, failed, julia_cap: Some(cap) })
}

/// Colour for a pair of iteration counts (`None` = never reached).
pub fn speed_color(twirl: Option<u32>, no_twirl: Option<u32>, delta_ref: f64) -> [u8; 3] {
    let scale = |d: f64| (255.0 * (d / delta_ref).min(1.0) + 0.5).floor() as u8;
    match (twirl, no_twirl) {
        (None, None) => BLACK,
        (Some(a), Some(b)) if a == b => WHITE,
        (Some(a), Some(b)) if a > b => [0, scale((a - b) as f64), 0],
        (Some(a), Some(b)) => [scale((b - a) as f64), 0, 0],
        (None, Some(_)) => [0, scale(delta_ref), 0],
        (Some(_), None) => [scale(delta_ref), 0, 0],
    }
}

/// Green where twirling every step is slower than twirling once at the end,
/// red where it is faster, white where both take equally long.
pub fn render_speed_diff(
    p: &Protocol,
    plane: &SlicePlane,
    m_max: u32,
    f_target: f64,
    delta_ref: f64,
) -> Result<Frame, RenderError> {
    if m_max == 0 {
        return Err(RenderError::Parameter("m_max must be at least 1".into()));
    }
    if !(delta_ref > 0.0) {
        return Err(RenderError::Parameter(format!("speed reference must be positive, got {delta_ref}")));
    }
    let pixels = sample(plane, |r| Some(speed_maps(p, r, m_max, f_target)));
    let (image, outside, failed) = paint(plane, &pixels, |&(a, b)| speed_color(a, b, delta_ref));
    Ok(Frame { image, outside, failed, julia_cap: None })
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool for `None`.
pub fn with_workers<R, F>(workers: Option<usize>, f: F) -> Result<R, RenderError>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| RenderError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub fn write_image(buf: &ImageBuffer, path: &Path, format: ImageFormat) -> Result<(), RenderError> {
    match format {
        ImageFormat::Ppm => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            file.write_all(&buf.to_ppm())?;
            file.flush()?;
        }
        ImageFormat::Png => {
            image::save_buffer_with_format(path, &buf.data, buf.width, buf.height, image::ExtendedColorType::Rgb8, image::ImageFormat::Png)?;
        }
    }
    Ok(())
}

/// `<image>.meta.txt` next to the image.
pub fn sidecar_path(image: &Path) -> PathBuf {
    let mut s = image.as_os_str().to_owned();
    s.push(".meta.txt");
    PathBuf::from(s)
}
