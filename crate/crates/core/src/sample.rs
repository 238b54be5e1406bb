//! Seeded random algebra elements for property checks and the verify
//! suite. Coordinates are drawn uniformly on [-1, 1] and then normalized,
//! so runs are reproducible from the seed alone.

use rand::Rng;

use crate::algebra::{AlgebraElement, LieAlgebraSpec};
use crate::error::Result;
use crate::expm::mat_exp;
use crate::matrix::ComplexMatrix;

/// A random element with unit inner-product norm.
pub fn random_unit_element(spec: &LieAlgebraSpec, rng: &mut impl Rng) -> Result<AlgebraElement> {
    loop {
        let coords: Vec<f64> = (0..spec.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = spec.element_from_coords(&coords)?;
        let norm = spec.norm(&x)?;
        if norm > 1e-6 {
            return Ok(x.scale(1.0 / norm));
        }
    }
}

/// A random element scaled to the requested inner-product norm.
pub fn random_element(
    spec: &LieAlgebraSpec,
    rng: &mut impl Rng,
    norm: f64,
) -> Result<AlgebraElement> {
    Ok(random_unit_element(spec, rng)?.scale(norm))
}

/// A random group element e^Z for unit-norm Z.
pub fn random_unitary(spec: &LieAlgebraSpec, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let z = random_unit_element(spec, rng)?;
    mat_exp(z.matrix())
}
