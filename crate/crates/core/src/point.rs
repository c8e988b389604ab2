use num_complex::Complex64;
use std::fmt;

/// A point of C^2.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 {
        z1: Complex64::new(0.0, 0.0),
        z2: Complex64::new(0.0, 0.0),
    };

    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    /// Point with real, non-negative-or-not coordinates `(x, y)`.
    pub fn real(x: f64, y: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), Complex64::new(y, 0.0))
    }

    /// Coordinatewise moduli `(|z1|, |z2|)`.
    pub fn moduli(&self) -> (f64, f64) {
        (self.z1.norm(), self.z2.norm())
    }

    /// The bilinear pairing `z1 w1 + z2 w2` (no conjugation).
    pub fn dot(&self, other: &Point2) -> Complex64 {
        self.z1 * other.z1 + self.z2 * other.z2
    }

    /// Coordinatewise product.
    pub fn mul(&self, other: &Point2) -> Point2 {
        Point2::new(self.z1 * other.z1, self.z2 * other.z2)
    }

    pub fn scale(&self, l1: f64, l2: f64) -> Point2 {
        Point2::new(self.z1 * l1, self.z2 * l2)
    }

    /// Multiply each coordinate by a unimodular phase.
    pub fn rotate(&self, theta1: f64, theta2: f64) -> Point2 {
        Point2::new(
            self.z1 * Complex64::from_polar(1.0, theta1),
            self.z2 * Complex64::from_polar(1.0, theta2),
        )
    }

    pub fn swap(&self) -> Point2 {
        Point2::new(self.z2, self.z1)
    }

    pub fn conj(&self) -> Point2 {
        Point2::new(self.z1.conj(), self.z2.conj())
    }

    /// Euclidean norm in C^2.
    pub fn norm(&self) -> f64 {
        self.z1.norm().hypot(self.z2.norm())
    }

    pub fn max_modulus(&self) -> f64 {
        self.z1.norm().max(self.z2.norm())
    }

    pub fn is_origin(&self) -> bool {
        self.z1 == Complex64::new(0.0, 0.0) && self.z2 == Complex64::new(0.0, 0.0)
    }
}

impl fmt::Debug for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z1, self.z2)
    }
}
