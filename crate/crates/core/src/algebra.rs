//! Finite-dimensional C*-algebra carriers.
//!
//! [`StarAlgebra`] is the common interface the group, module and verifier code is
//! written against. A carrier is a descriptor (shape data such as a degree bound
//! or a matrix size); its elements are plain values checked against the
//! descriptor with [`StarAlgebra::contains`].

use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::Result;

pub type CMatrix = DMatrix<Complex64>;

/// Carriers at or below this dimension are probed on a full basis.
pub const PROBE_BASIS_LIMIT: usize = 256;
/// Number of pseudo-random complex probes added to every probe family.
pub const RANDOM_PROBES: usize = 6;

const PROBE_SEED: u64 = 0x6e63_636f_7665_7221;

pub trait StarAlgebra {
    type Elem: Clone + fmt::Debug;

    /// Complex dimension of the carrier as a vector space.
    fn dimension(&self) -> usize;
    fn contains(&self, a: &Self::Elem) -> bool;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: Complex64, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn adjoint(&self, a: &Self::Elem) -> Self::Elem;
    /// C*-norm estimate for the carrier.
    fn norm(&self, a: &Self::Elem) -> f64;
    /// A vector-space basis, in a fixed order.
    fn basis(&self) -> Vec<Self::Elem>;
    /// Coordinates with respect to [`StarAlgebra::basis`].
    fn coords(&self, a: &Self::Elem) -> Vec<Complex64>;
    #[allow(clippy::wrong_self_convention)]
    fn from_coords(&self, coords: &[Complex64]) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(Complex64::new(-1.0, 0.0), b))
    }

    fn distance(&self, a: &Self::Elem, b: &Self::Elem) -> f64 {
        self.norm(&self.sub(a, b))
    }

    /// Deterministic test family: the basis for small carriers, followed by
    /// [`RANDOM_PROBES`] pseudo-random complex elements.
    fn probes(&self) -> Vec<Self::Elem> {
        let mut out = if self.dimension() <= PROBE_BASIS_LIMIT { self.basis() } else { Vec::new() };
        for i in 0..RANDOM_PROBES {
            out.push(self.from_coords(&random_coords(self.dimension(), PROBE_SEED + i as u64)));
        }
        out
    }
}

/// Uniform pseudo-random coordinates in the square `[-1, 1]²`, reproducible per seed.
pub fn random_coords(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unit = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
    (0..dim).map(|_| Complex64::new(unit(), unit())).collect()
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Full matrix algebra `M_size(C)` with the operator 2-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixAlgebra {
    pub size: usize,
}

impl MatrixAlgebra {
    pub fn new(size: usize) -> Self {
        MatrixAlgebra { size }
    }
}

impl StarAlgebra for MatrixAlgebra {
    type Elem = CMatrix;

    fn dimension(&self) -> usize {
        self.size * self.size
    }

    fn contains(&self, a: &CMatrix) -> bool {
        a.nrows() == self.size && a.ncols() == self.size
    }

    fn zero(&self) -> CMatrix {
        CMatrix::zeros(self.size, self.size)
    }

    fn one(&self) -> CMatrix {
        CMatrix::identity(self.size, self.size)
    }

    fn add(&self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        a + b
    }

    fn scale(&self, c: Complex64, a: &CMatrix) -> CMatrix {
        a * c
    }

    fn mul(&self, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
        Ok(a * b)
    }

    fn adjoint(&self, a: &CMatrix) -> CMatrix {
        a.adjoint()
    }

    fn norm(&self, a: &CMatrix) -> f64 {
        op_norm(a)
    }

    fn basis(&self) -> Vec<CMatrix> {
        let q = self.size;
        (0..q * q)
            .map(|idx| {
                let mut m = CMatrix::zeros(q, q);
                m[(idx / q, idx % q)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect()
    }

    fn coords(&self, a: &CMatrix) -> Vec<Complex64> {
        let q = self.size;
        (0..q * q).map(|idx| a[(idx / q, idx % q)]).collect()
    }

    fn from_coords(&self, coords: &[Complex64]) -> CMatrix {
        let q = self.size;
        CMatrix::from_fn(q, q, |i, j| coords[i * q + j])
    }
}

/// Element of [`BlockAlgebra`]: `blocks.len()` diagonal blocks of equal size.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    pub blocks: Vec<CMatrix>,
}

impl BlockMatrix {
    /// The same block repeated `count` times.
    pub fn repeated(block: &CMatrix, count: usize) -> Self {
        BlockMatrix { blocks: (0..count).map(|_| block.clone()).collect() }
    }
}

/// Block-diagonal matrices `C^blocks ⊗ M_size`, normed by the largest block norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockAlgebra {
    pub blocks: usize,
    pub size: usize,
}

impl BlockAlgebra {
    pub fn new(blocks: usize, size: usize) -> Self {
        BlockAlgebra { blocks, size }
    }

    fn zip(&self, a: &BlockMatrix, b: &BlockMatrix, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> BlockMatrix {
        BlockMatrix { blocks: a.blocks.iter().zip(&b.blocks).map(|(x, y)| f(x, y)).collect() }
    }
}

impl StarAlgebra for BlockAlgebra {
    type Elem = BlockMatrix;

    fn dimension(&self) -> usize {
        self.blocks * self.size * self.size
    }

    fn contains(&self, a: &BlockMatrix) -> bool {
        a.blocks.len() == self.blocks
            && a.blocks.iter().all(|b| b.nrows() == self.size && b.ncols() == self.size)
    }

    fn zero(&self) -> BlockMatrix {
        BlockMatrix::repeated(&CMatrix::zeros(self.size, self.size), self.blocks)
    }

    fn one(&self) -> BlockMatrix {
        BlockMatrix::repeated(&CMatrix::identity(self.size, self.size), self.blocks)
    }

    fn add(&self, a: &BlockMatrix, b: &BlockMatrix) -> BlockMatrix {
        self.zip(a, b, |x, y| x + y)
    }

    fn scale(&self, c: Complex64, a: &BlockMatrix) -> BlockMatrix {
        BlockMatrix { blocks: a.blocks.iter().map(|x| x * c).collect() }
    }

    fn mul(&self, a: &BlockMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
        Ok(self.zip(a, b, |x, y| x * y))
    }

    fn adjoint(&self, a: &BlockMatrix) -> BlockMatrix {
        BlockMatrix { blocks: a.blocks.iter().map(|x| x.adjoint()).collect() }
    }

    fn norm(&self, a: &BlockMatrix) -> f64 {
        a.blocks.iter().map(op_norm).fold(0.0, f64::max)
    }

    fn basis(&self) -> Vec<BlockMatrix> {
        let unit = MatrixAlgebra::new(self.size).basis();
        let zero = CMatrix::zeros(self.size, self.size);
        let mut out = Vec::with_capacity(self.dimension());
        for l in 0..self.blocks {
            for e in &unit {
                let mut m = BlockMatrix::repeated(&zero, self.blocks);
                m.blocks[l] = e.clone();
                out.push(m);
            }
        }
        out
    }

    fn coords(&self, a: &BlockMatrix) -> Vec<Complex64> {
        let full = MatrixAlgebra::new(self.size);
        a.blocks.iter().flat_map(|b| full.coords(b)).collect()
    }

    fn from_coords(&self, coords: &[Complex64]) -> BlockMatrix {
        let full = MatrixAlgebra::new(self.size);
        let chunk = self.size * self.size;
        BlockMatrix { blocks: coords.chunks(chunk).take(self.blocks).map(|c| full.from_coords(c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_round_trip_on_blocks() {
        let alg = BlockAlgebra::new(3, 2);
        let c = random_coords(alg.dimension(), 7);
        let m = alg.from_coords(&c);
        assert!(alg.contains(&m));
        assert_eq!(alg.coords(&m), c);
    }

    #[test]
    fn operator_norm_of_unitary_is_one() {
        let alg = MatrixAlgebra::new(2);
        let mut swap = alg.zero();
        swap[(0, 1)] = Complex64::new(1.0, 0.0);
        swap[(1, 0)] = Complex64::new(0.0, 1.0);
        assert!((alg.norm(&swap) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn probes_include_basis_for_small_carriers() {
        let alg = MatrixAlgebra::new(3);
        assert_eq!(alg.probes().len(), 9 + RANDOM_PROBES);
    }
}
