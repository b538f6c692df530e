//! Triangles, sectors and the smoothed sector functions `ψ₋`, `ψ₊`.
//!
//! All regions are symmetric about the positive y-axis with apex at the
//! origin and half apex angle `θ`.

use serde::Serialize;

use crate::averaging::smoothstep;
use crate::error::{Error, Result};
use crate::planar::{angle_from_vertical, PlanarFunction};
use crate::surface::PlanarVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// Triangle of height `cos θ`, vertices `0, r_{±θ} e₂`.
    W1,
    /// Triangle of height 1, vertices `0, (∓tan θ, 1)`.
    W2,
    /// Sector of radius `cos θ`.
    S1,
    /// Sector of radius `1/cos θ`.
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionIndicator {
    pub theta: f64,
    pub which: Region,
}

impl RegionIndicator {
    pub fn new(theta: f64, which: Region) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidArgument(format!("θ must lie in (0, 1), got {theta}")));
        }
        Ok(RegionIndicator { theta, which })
    }

    pub fn contains(&self, v: PlanarVector) -> bool {
        let g = angle_from_vertical(v).abs();
        let th = self.theta;
        match self.which {
            Region::W1 => g <= th && v.y <= th.cos(),
            Region::W2 => g <= th && v.y <= 1.0,
            Region::S1 => g <= th && v.norm() <= th.cos(),
            Region::S2 => g <= th && v.norm() <= 1.0 / th.cos(),
        }
    }

    pub fn area(&self) -> f64 {
        let th = self.theta;
        match self.which {
            Region::W1 => th.cos() * th.sin(),
            Region::W2 => th.tan(),
            Region::S1 => th * th.cos().powi(2),
            Region::S2 => th / th.cos().powi(2),
        }
    }
}

impl PlanarFunction for RegionIndicator {
    fn value(&self, v: PlanarVector) -> f64 {
        if self.contains(v) {
            1.0
        } else {
            0.0
        }
    }
    fn support_radius(&self) -> f64 {
        match self.which {
            Region::W1 | Region::S1 => self.theta.cos(),
            Region::W2 | Region::S2 => 1.0 / self.theta.cos(),
        }
    }
    fn integral(&self) -> f64 {
        self.area()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BumpSign {
    Minus,
    Plus,
}

/// `ψ₋` lies below the sector `S₁`; `ψ₊` lies above `S₂`. The smoothing
/// width is `δ = θ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothBump {
    pub theta: f64,
    pub delta: f64,
    pub sign: BumpSign,
}

impl SmoothBump {
    pub fn new(theta: f64, sign: BumpSign) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidArgument(format!("θ must lie in (0, 1), got {theta}")));
        }
        Ok(SmoothBump {
            theta,
            delta: theta * theta,
            sign,
        })
    }

    /// Angular profile and its derivative at signed angle `x` from the axis.
    pub fn profile(&self, x: f64) -> (f64, f64) {
        let edge = match self.sign {
            BumpSign::Minus => self.theta,
            BumpSign::Plus => self.theta + self.delta,
        };
        let (h, dh) = smoothstep((edge - x.abs()) / self.delta);
        (h, -x.signum() * dh / self.delta)
    }

    fn radius(&self) -> f64 {
        match self.sign {
            BumpSign::Minus => self.theta.cos(),
            BumpSign::Plus => 1.0 / self.theta.cos(),
        }
    }
}

impl PlanarFunction for SmoothBump {
    fn value(&self, v: PlanarVector) -> f64 {
        if v.norm() > self.radius() {
            return 0.0;
        }
        self.profile(angle_from_vertical(v)).0
    }
    fn support_radius(&self) -> f64 {
        self.radius()
    }
    fn integral(&self) -> f64 {
        let (th, d) = (self.theta, self.delta);
        match self.sign {
            BumpSign::Minus => th.cos().powi(2) / 2.0 * (2.0 * th - d),
            BumpSign::Plus => (2.0 * th + d) / (2.0 * th.cos().powi(2)),
        }
    }
    fn angular_derivative(&self, v: PlanarVector) -> Option<f64> {
        if v.norm() > self.radius() {
            return Some(0.0);
        }
        Some(self.profile(angle_from_vertical(v)).1)
    }
}

/// `ψ_(±,δ)(v)`.
pub fn smooth_psi(b: &SmoothBump, v: PlanarVector) -> f64 {
    b.value(v)
}
