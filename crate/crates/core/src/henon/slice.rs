use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{escape_radius, henon_step_complex, is_escaped_modulus, HenonError, HenonParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceConfig {
    pub resolution: usize,
    pub radius: f64,
    #[serde(serialize_with = "complex_pair")]
    pub center: Complex64,
    pub seed_depth: u32,
    pub budget: u32,
}

impl Default for SliceConfig {
    fn default() -> Self {
        SliceConfig { resolution: 256, radius: 2.0, center: Complex64::new(0.0, 0.0), seed_depth: 24, budget: 200 }
    }
}

fn complex_pair<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceMeta {
    #[serde(serialize_with = "complex_pair")]
    pub a: Complex64,
    pub b: f64,
    #[serde(flatten)]
    pub config: SliceConfig,
    pub escape_radius: f64,
    #[serde(serialize_with = "complex_pair")]
    pub saddle: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub multiplier: Complex64,
}

/// Escape-time grid over a square window in the manifold parameter `t`.
/// Row 0 is the top of the window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u32>,
    pub meta: SliceMeta,
}

impl SliceImage {
    pub fn pixel(&self, i: usize, j: usize) -> u32 {
        self.pixels[j * self.width + i]
    }

    pub fn non_escaping_fraction(&self) -> f64 {
        self.pixels.iter().filter(|&&p| p == 0).count() as f64 / self.pixels.len() as f64
    }

    pub fn meta_line(&self) -> String {
        let m = &self.meta;
        format!(
            "a={} {} b={} center={} {} radius={} res={} n0={} R={} budget={}",
            m.a.re,
            m.a.im,
            m.b,
            m.config.center.re,
            m.config.center.im,
            m.config.radius,
            m.config.resolution,
            m.config.seed_depth,
            m.escape_radius,
            m.config.budget
        )
    }

    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n# {}\n{} {}\n{}\n", self.meta_line(), self.width, self.height, self.meta.config.budget.max(1));
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

/// Principal square root, conjugation-symmetric off the real axis.
fn csqrt(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        z.sqrt()
    } else {
        z.conj().sqrt().conj()
    }
}

struct Saddle {
    x: Complex64,
    lambda: Complex64,
}

fn saddle(a: Complex64, b: f64) -> Result<Saddle, HenonError> {
    let d = Complex64::new((1.0 + b).powi(2), 0.0) + a * 4.0;
    if d.norm() == 0.0 {
        return Err(HenonError::DegenerateSaddle);
    }
    let x = (-csqrt(d) - (1.0 + b)) / 2.0;
    let s = csqrt(x * x - b);
    let (l1, l2) = (-x + s, -x - s);
    let lambda = if l1.norm() >= l2.norm() { l1 } else { l2 };
    if lambda.norm() <= 1.0 || l1.norm() == l2.norm() {
        return Err(HenonError::DegenerateSaddle);
    }
    Ok(Saddle { x, lambda })
}

/// Escape-time slice of the unstable manifold of the saddle continued from `0^∞`.
pub fn unstable_slice(a: Complex64, b: f64, cfg: &SliceConfig) -> Result<SliceImage, HenonError> {
    if cfg.resolution == 0 || !(cfg.radius > 0.0) {
        return Err(HenonError::InvalidConfig("resolution and radius must be positive".into()));
    }
    let Saddle { x: p, lambda } = saddle(a, b)?;
    let r = escape_radius(&HenonParams::new(a, b));
    let inv = Complex64::new(1.0, 0.0) / lambda;
    let mut scale = Complex64::new(1.0, 0.0);
    for _ in 0..cfg.seed_depth {
        scale *= inv;
    }
    let res = cfg.resolution;
    let escaped = |x: Complex64, y: Complex64| is_escaped_modulus(r, x.norm(), y.norm());
    let pixel = |idx: usize| -> u32 {
        let (i, j) = (idx % res, idx / res);
        let t = cfg.center
            + Complex64::new(
                (2 * i + 1) as f64 - res as f64,
                res as f64 - 1.0 - (2 * j) as f64,
            ) * (cfg.radius / res as f64);
        let mut dx = t * scale * lambda;
        let mut dy = t * scale;
        for _ in 0..cfg.seed_depth {
            let nx = -(p * dx * 2.0) - dx * dx - dy * b;
            dy = dx;
            dx = nx;
            if escaped(p + dx, p + dy) {
                return 1;
            }
        }
        let mut z = (p + dx, p + dy);
        for k in 1..=cfg.budget {
            if escaped(z.0, z.1) {
                return k;
            }
            z = henon_step_complex(a, b, z);
        }
        0
    };
    let pixels = (0..res * res).into_par_iter().map(pixel).collect();
    Ok(SliceImage {
        width: res,
        height: res,
        pixels,
        meta: SliceMeta { a, b, config: *cfg, escape_radius: r, saddle: p, multiplier: lambda },
    })
}
