use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};

/// Axis-aligned rectangle `(x_l, x_r) × (y_l, y_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_l: f64,
    pub x_r: f64,
    pub y_l: f64,
    pub y_r: f64,
}

impl Rect {
    pub const UNIT: Rect = Rect {
        x_l: 0.0,
        x_r: 1.0,
        y_l: 0.0,
        y_r: 1.0,
    };
}

impl Default for Rect {
    fn default() -> Self {
        Self::UNIT
    }
}

/// Uniform tensor grid with homogeneous Dirichlet boundary.
///
/// Unknowns are the interior nodes `1 <= i <= Mx-1`, `1 <= j <= My-1`, stored
/// x-fastest: `idx(i, j) = (j-1)(Mx-1) + (i-1)`.
///
/// ```text
///  j=My  o---o---o---o      o  boundary (zero)
///        |   |   |   |      *  unknown
///        o---*---*---o
///        |   |   |   |
///        o---*---*---o
///        |   |   |   |
///  j=0   o---o---o---o
///       i=0         i=Mx
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub mx: usize,
    pub my: usize,
    pub rect: Rect,
    pub hx: f64,
    pub hy: f64,
}

impl Grid2D {
    pub fn new(mx: usize, my: usize, rect: Rect) -> Result<Self> {
        if mx < 2 || my < 2 {
            return Err(FracError::invalid(format!("grid needs Mx, My >= 2, got {mx}x{my}")));
        }
        if !(rect.x_r > rect.x_l && rect.y_r > rect.y_l) {
            return Err(FracError::invalid("empty domain"));
        }
        Ok(Self {
            mx,
            my,
            rect,
            hx: (rect.x_r - rect.x_l) / mx as f64,
            hy: (rect.y_r - rect.y_l) / my as f64,
        })
    }

    /// Square grid `M × M` on the unit square.
    pub fn unit(m: usize) -> Result<Self> {
        Self::new(m, m, Rect::UNIT)
    }

    /// Number of interior unknowns `(Mx-1)(My-1)`.
    pub fn len(&self) -> usize {
        (self.mx - 1) * (self.my - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        (j - 1) * (self.mx - 1) + (i - 1)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.rect.x_l + i as f64 * self.hx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.rect.y_l + j as f64 * self.hy
    }

    /// Sample `f(x, y)` at the interior nodes.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for j in 1..self.my {
            let y = self.y(j);
            for i in 1..self.mx {
                out.push(f(self.x(i), y));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let g = Grid2D::unit(4).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.idx(1, 1), 0);
        assert_eq!(g.idx(3, 1), 2);
        assert_eq!(g.idx(1, 2), 3);
        let v = g.sample(|x, y| 10.0 * x + y);
        assert_eq!(v[g.idx(2, 3)], 10.0 * 0.5 + 0.75);
        assert!(Grid2D::unit(1).is_err());
    }
}
