//! Dimension-generic vectors, orthogonal projection onto a direction's
//! complement hyperplane, and unit-ball volumes.

use std::ops::{Deref, Index};

use crate::error::{Error, Result};

/// Norm slack tolerated by [`UnitVector::new`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// A point or direction in `R^n`, `n >= 1`, with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    /// Standard basis vector `e_axis` in `dim`-space.
    pub fn axis(dim: usize, axis: usize) -> Self {
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector { coords: self.coords.iter().map(|a| a * s).collect() }
    }

    /// Normalize to unit length; errors on vectors of norm below 1e-300.
    pub fn normalized(&self) -> Result<UnitVector> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::ZeroVector);
        }
        Ok(UnitVector { inner: self.scale(1.0 / n) })
    }

    /// Cross product, 3-space only.
    pub fn cross3(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), 3);
        debug_assert_eq!(other.dim(), 3);
        let a = &self.coords;
        let b = &other.coords;
        Vector {
            coords: vec![
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ],
        }
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// A vector whose Euclidean norm is within [`UNIT_NORM_TOL`] of 1.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector {
    inner: Vector,
}

impl UnitVector {
    pub fn new(v: Vector) -> Result<Self> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self { inner: v })
    }

    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        Vector::from_slice(coords)?.normalized()
    }

    pub fn as_vector(&self) -> &Vector {
        &self.inner
    }

    pub fn into_vector(self) -> Vector {
        self.inner
    }

    pub fn negated(&self) -> UnitVector {
        UnitVector { inner: self.inner.scale(-1.0) }
    }
}

impl Deref for UnitVector {
    type Target = Vector;
    fn deref(&self) -> &Vector {
        &self.inner
    }
}

/// Orthogonal projection of `x` onto the hyperplane `u^perp`: `x - (x.u) u`.
pub fn project_to_complement(x: &Vector, u: &UnitVector) -> Result<Vector> {
    if x.dim() != u.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: u.dim() });
    }
    Ok(x.sub(&u.scale(x.dot(u))))
}

/// Deterministic orthonormal basis of `u^perp`.
///
/// The standard basis vector along the largest-|component| axis of `u` is
/// dropped, and the remaining ones are Gram-Schmidt orthonormalized against
/// `u` in index order. Dropping the dominant axis keeps every pivot far from
/// degenerate.
pub fn complement_basis(u: &UnitVector) -> Result<Vec<UnitVector>> {
    let dim = u.dim();
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    let dominant = (0..dim).max_by(|&a, &b| u[a].abs().partial_cmp(&u[b].abs()).unwrap()).unwrap();
    let mut basis: Vec<UnitVector> = Vec::with_capacity(dim - 1);
    for axis in 0..dim {
        if axis == dominant {
            continue;
        }
        let mut v = Vector::axis(dim, axis);
        v = v.sub(&u.scale(v.dot(u)));
        for b in &basis {
            v = v.sub(&b.scale(v.dot(b)));
        }
        basis.push(v.normalized()?);
    }
    Ok(basis)
}

/// Coordinates of `x` in the `complement_basis(u)` frame.
pub fn complement_coordinates(x: &Vector, basis: &[UnitVector]) -> Vec<f64> {
    basis.iter().map(|b| x.dot(b)).collect()
}

/// Volume of the unit ball in `n`-space: `pi^(n/2) / Gamma(n/2 + 1)`,
/// evaluated exactly through the two-step recurrence
/// `w_n = 2 pi w_{n-2} / n` with `w_1 = 2`, `w_2 = pi`.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidDimension { dim: n, min: 1 });
    }
    let mut w = if n % 2 == 1 { 2.0 } else { std::f64::consts::PI };
    let mut k = if n % 2 == 1 { 1 } else { 2 };
    while k < n {
        k += 2;
        w *= 2.0 * std::f64::consts::PI / k as f64;
    }
    Ok(w)
}

/// Surface area of the unit sphere `S^(n-1)`, i.e. `n * w_n`.
pub fn sphere_surface_area(n: usize) -> Result<f64> {
    Ok(n as f64 * unit_ball_volume(n)?)
}
