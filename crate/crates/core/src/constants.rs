//! CODATA 2018 constants in SI, plus the fs/nm conversions used everywhere else.

use std::f64::consts::PI;

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
pub const AVOGADRO: f64 = 6.022_140_76e23;

/// Seconds per femtosecond.
pub const FS: f64 = 1e-15;

/// Speed of light in nm/fs.
pub const C_NM_PER_FS: f64 = 299.792_458;

/// Vacuum wavelength (nm) to angular frequency (rad/fs).
pub fn nm_to_rad_per_fs(lambda_nm: f64) -> f64 {
    2.0 * PI * C_NM_PER_FS / lambda_nm
}

/// Angular frequency (rad/fs) to vacuum wavelength (nm).
pub fn rad_per_fs_to_nm(omega: f64) -> f64 {
    2.0 * PI * C_NM_PER_FS / omega
}
