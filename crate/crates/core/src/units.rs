//! Unit conversions. Atomic units are used internally.

/// Bohr radius in Angstrom.
pub const BOHR_IN_ANGSTROM: f64 = 0.52917721;

/// 1 kcal/mol in Hartree, rounded the way quantum chemistry usually quotes it.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

pub fn angstrom_to_bohr(r: f64) -> f64 {
    r / BOHR_IN_ANGSTROM
}

pub fn bohr_to_angstrom(r: f64) -> f64 {
    r * BOHR_IN_ANGSTROM
}
