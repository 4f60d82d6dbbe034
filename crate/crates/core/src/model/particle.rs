use crate::constants::{e_charge, ELEMENTARY_CHARGE};
use crate::error::{Error, Result};
use crate::Scalar;

/// Sphere mass `(4/3) pi r^3 rho`.
pub fn derive_mass<T: Scalar>(radius: T, density: T) -> Result<T> {
    if !(radius > T::zero()) || !radius.is_finite() {
        return Err(Error::invalid(
            "radius",
            format!("must be positive, got {radius}"),
        ));
    }
    if !(density > T::zero()) || !density.is_finite() {
        return Err(Error::invalid(
            "density",
            format!("must be positive, got {density}"),
        ));
    }
    Ok(T::lit(4.0 / 3.0) * T::PI() * radius * radius * radius * density)
}

/// A levitated homogeneous sphere. Charge is stored in coulomb; the
/// constructor takes it in multiples of the elementary charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpec<T: Scalar = f64> {
    radius: T,
    density: T,
    charge: T,
    mass: T,
}

impl<T: Scalar> ParticleSpec<T> {
    pub fn new(radius: T, density: T, charge_e: T) -> Result<Self> {
        let mass = derive_mass(radius, density)?;
        if !charge_e.is_finite() {
            return Err(Error::invalid("charge", "must be finite"));
        }
        Ok(Self {
            radius,
            density,
            charge: charge_e * e_charge(),
            mass,
        })
    }

    /// Silica (2200 kg/m^3) sphere.
    pub fn silica(radius: T, charge_e: T) -> Result<Self> {
        Self::new(radius, T::lit(2200.0), charge_e)
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn density(&self) -> T {
        self.density
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// Charge in coulomb.
    pub fn charge(&self) -> T {
        self.charge
    }

    /// Charge in multiples of `e`.
    pub fn charge_e(&self) -> T {
        self.charge / e_charge()
    }

    pub fn with_charge_e(self, charge_e: T) -> Self {
        Self {
            charge: charge_e * T::lit(ELEMENTARY_CHARGE),
            ..self
        }
    }

    pub fn with_radius(self, radius: T) -> Result<Self> {
        Self::new(radius, self.density, self.charge_e())
    }

    pub fn cast<U: Scalar>(&self) -> ParticleSpec<U> {
        ParticleSpec {
            radius: U::lit(self.radius.as_f64()),
            density: U::lit(self.density.as_f64()),
            charge: U::lit(self.charge.as_f64()),
            mass: U::lit(self.mass.as_f64()),
        }
    }
}
