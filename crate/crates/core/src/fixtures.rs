//! Small reference spaces: circle, torus and Klein bottle as presentations
//! and Fox complexes, plus deformation models of the circle, the torus and
//! the Heisenberg nilmanifold.

use crate::complex::{fox_complex, AbelianizationMap, FreeComplex, Presentation, Representation};
use crate::laurent::rat;
use crate::linalg::QMatrix;
use crate::specseq::DeformationModel;

/// A presentation together with the abelianization map used to build its
/// Laurent complex.
#[derive(Debug, Clone)]
pub struct Space {
    pub name: &'static str,
    pub presentation: Presentation,
    pub phi: AbelianizationMap,
}

impl Space {
    /// Fox complex with the trivial one-dimensional representation.
    pub fn complex(&self) -> FreeComplex {
        fox_complex(&self.presentation, &Representation::trivial(self.presentation.generators()), &self.phi)
            .expect("fixture data is consistent")
    }
}

/// `⟨x | ⟩`, `x ↦ t`.
pub fn circle() -> Space {
    Space {
        name: "circle",
        presentation: Presentation::new(1, vec![]).expect("valid"),
        phi: AbelianizationMap::new(1, vec![vec![1]]).expect("valid"),
    }
}

/// `⟨x, y | x y x⁻¹ y⁻¹⟩`, `x ↦ t`, `y ↦ s`.
pub fn torus() -> Space {
    Space {
        name: "torus",
        presentation: Presentation::new(2, vec![vec![1, 2, -1, -2]]).expect("valid"),
        phi: AbelianizationMap::new(2, vec![vec![1, 0], vec![0, 1]]).expect("valid"),
    }
}

/// `⟨x, y | x y x y⁻¹⟩`, `x ↦ 1`, `y ↦ t` (the free part of the
/// abelianization).
pub fn klein_bottle() -> Space {
    Space {
        name: "klein",
        presentation: Presentation::new(2, vec![vec![1, 2, 1, -2]]).expect("valid"),
        phi: AbelianizationMap::new(1, vec![vec![0], vec![1]]).expect("valid"),
    }
}

pub fn spaces() -> Vec<Space> {
    vec![circle(), torus(), klein_bottle()]
}

fn q(rows: usize, cols: usize, entries: &[i64]) -> QMatrix {
    QMatrix::new(rows, cols, (), entries.iter().map(|&x| rat(x)).collect()).expect("fixture shape")
}

/// Cohomology of the circle with `e` the cup product by the generator.
pub fn circle_model() -> DeformationModel {
    DeformationModel::new(vec![1, 1], vec![q(1, 1, &[0])], vec![q(1, 1, &[1])]).expect("fixture shape")
}

/// Exterior algebra on `x, y` with `d = 0`, `e = x ∧ -`.
/// Bases: `1 | x, y | xy`.
pub fn torus_model() -> DeformationModel {
    DeformationModel::new(
        vec![1, 2, 1],
        vec![q(2, 1, &[0, 0]), q(1, 2, &[0, 0])],
        vec![q(2, 1, &[1, 0]), q(1, 2, &[0, 1])],
    )
    .expect("fixture shape")
}

/// Minimal model of the Heisenberg nilmanifold: `dz = x ∧ y`, `e = x ∧ -`.
/// Bases: `1 | x, y, z | xy, xz, yz | xyz`.
pub fn heisenberg_model() -> DeformationModel {
    DeformationModel::new(
        vec![1, 3, 3, 1],
        vec![q(3, 1, &[0, 0, 0]), q(3, 3, &[0, 0, 1, 0, 0, 0, 0, 0, 0]), q(1, 3, &[0, 0, 0])],
        vec![q(3, 1, &[1, 0, 0]), q(3, 3, &[0, 1, 0, 0, 0, 1, 0, 0, 0]), q(1, 3, &[0, 0, 1])],
    )
    .expect("fixture shape")
}
