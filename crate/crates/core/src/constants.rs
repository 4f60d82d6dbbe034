//! CODATA 2018 constants, SI units.

use crate::Scalar;

pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// One millibar in pascal.
pub const MBAR: f64 = 100.0;

#[inline]
pub fn k_b<T: Scalar>() -> T {
    T::lit(BOLTZMANN)
}

#[inline]
pub fn hbar<T: Scalar>() -> T {
    T::lit(HBAR)
}

#[inline]
pub fn e_charge<T: Scalar>() -> T {
    T::lit(ELEMENTARY_CHARGE)
}

#[inline]
pub fn amu<T: Scalar>() -> T {
    T::lit(ATOMIC_MASS_UNIT)
}
