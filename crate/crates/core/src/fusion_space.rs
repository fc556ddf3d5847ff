//! Two-qubit fusion space of six defects in the pairwise basis and the
//! matrices of the five elementary braids.
//!
//! Defects are paired as (1,2), (3,4), (5,6). The outer pairs carry the two
//! qubits (`1 ↦ 0`, `f ↦ 1`) and the middle pair is fixed by total charge.

use std::fmt;

use nalgebra::Vector4;
use serde::Serialize;

use crate::consistency::{solve_defect_f, solve_defect_r};
use crate::error::{Error, Result};
use crate::linalg::{self, kron, Mat2, Mat4, C64, ONE};

/// Fusion outcome of one defect pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Channel {
    #[serde(rename = "1")]
    Vacuum,
    #[serde(rename = "f")]
    Fermion,
}

impl Channel {
    pub fn bit(self) -> usize {
        match self {
            Channel::Vacuum => 0,
            Channel::Fermion => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Channel::Vacuum
        } else {
            Channel::Fermion
        }
    }

    /// Z2 product: `f·f = 1`.
    pub fn fuse(self, other: Channel) -> Channel {
        Channel::from_bit(self.bit() ^ other.bit())
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Vacuum => "1",
            Channel::Fermion => "f",
        })
    }
}

/// Channels `(a, c, b)` of pairs (1,2), (3,4), (5,6).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PairChannelBasis {
    pub a: Channel,
    pub c: Channel,
    pub b: Channel,
}

impl PairChannelBasis {
    pub fn from_qubits(q1: usize, q2: usize) -> Self {
        let (a, b) = (Channel::from_bit(q1), Channel::from_bit(q2));
        PairChannelBasis { a, c: a.fuse(b), b }
    }

    pub fn triple(&self) -> (Channel, Channel, Channel) {
        (self.a, self.c, self.b)
    }

    pub fn qubits(&self) -> (usize, usize) {
        (self.a.bit(), self.b.bit())
    }

    /// Position in the `00, 01, 10, 11` ordering.
    pub fn index(&self) -> usize {
        2 * self.a.bit() + self.b.bit()
    }

    pub fn is_admissible(&self) -> bool {
        (self.a.bit() + self.c.bit() + self.b.bit()).is_multiple_of(2)
    }
}

impl fmt::Display for PairChannelBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.c, self.b)
    }
}

/// The four admissible channel triples in qubit order.
pub fn enumerate_basis() -> [PairChannelBasis; 4] {
    [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(q1, q2)| PairChannelBasis::from_qubits(q1, q2))
}

/// Channel assignments of `pairs` defect pairs with vacuum total charge.
pub fn pair_channel_assignments(pairs: usize) -> Vec<Vec<Channel>> {
    (0..1usize << pairs)
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(|mask| {
            (0..pairs)
                .map(|i| Channel::from_bit(mask >> (pairs - 1 - i)))
                .collect()
        })
        .collect()
}

/// State of the two-qubit fusion space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FusionBasisState {
    pub amplitudes: Vector4<C64>,
}

impl FusionBasisState {
    pub fn basis(index: usize) -> Self {
        let mut amplitudes = Vector4::zeros();
        amplitudes[index % 4] = ONE;
        FusionBasisState { amplitudes }
    }

    pub fn new(amplitudes: Vector4<C64>) -> Self {
        FusionBasisState { amplitudes }
    }

    /// Parses a two-character bitstring such as `"01"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        match bits {
            "00" => Ok(Self::basis(0)),
            "01" => Ok(Self::basis(1)),
            "10" => Ok(Self::basis(2)),
            "11" => Ok(Self::basis(3)),
            _ => Err(Error::Parameter(format!(
                "basis state `{bits}` is not one of 00, 01, 10, 11"
            ))),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Overlap modulus `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &FusionBasisState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm()
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amplitudes.iter().map(|z| linalg::pair(*z)).collect()
    }
}

/// `F⁻¹ R F`.
pub fn bmatrix(f: &Mat2, r: &Mat2) -> Result<Mat2> {
    if !linalg::is_unitary(f, 1e-10) {
        return Err(Error::Precondition("F is not unitary".into()));
    }
    let diagonal = r[(0, 1)].norm() < 1e-12 && r[(1, 0)].norm() < 1e-12;
    let unit = (0..2).all(|i| (r[(i, i)].norm() - 1.0).abs() < 1e-10);
    if !diagonal || !unit {
        return Err(Error::Precondition(
            "R is not diagonal with unit-modulus entries".into(),
        ));
    }
    Ok(f.adjoint() * r * f)
}

/// One elementary braid in the qubit basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BraidGeneratorMatrix {
    pub index: usize,
    pub matrix: Mat4,
}

/// σ₁ = R⊗I, σ₂ = B⊗I, σ₃ = diag over the middle channel, σ₄ = I⊗B, σ₅ = I⊗R.
pub fn braid_generator(index: i64, f: &Mat2, r: &Mat2) -> Result<BraidGeneratorMatrix> {
    if !(1..=5).contains(&index) {
        return Err(Error::GeneratorRange(index));
    }
    let b = bmatrix(f, r)?;
    let id = Mat2::identity();
    let matrix = match index {
        1 => kron(r, &id),
        2 => kron(&b, &id),
        3 => {
            let phases = enumerate_basis().map(|s| r[(s.c.bit(), s.c.bit())]);
            Mat4::from_diagonal(&Vector4::from(phases))
        }
        4 => kron(&id, &b),
        _ => kron(&id, r),
    };
    Ok(BraidGeneratorMatrix {
        index: index as usize,
        matrix,
    })
}

/// Solved defect data and the generator matrices built from it.
#[derive(Clone, Debug, PartialEq)]
pub struct DefectRepresentation {
    pub f: Mat2,
    pub r: Mat2,
    generators: [Mat4; 5],
    inverses: [Mat4; 5],
}

impl DefectRepresentation {
    pub fn new(f: Mat2, r: Mat2) -> Result<Self> {
        let mut generators = [Mat4::zeros(); 5];
        for (i, g) in generators.iter_mut().enumerate() {
            *g = braid_generator(i as i64 + 1, &f, &r)?.matrix;
        }
        let inverses = generators.map(|g| g.adjoint());
        Ok(DefectRepresentation {
            f,
            r,
            generators,
            inverses,
        })
    }

    /// Representation from the solved F-block and canonical R-symbols.
    pub fn solved() -> Self {
        let f = solve_defect_f().matrix;
        let r = solve_defect_r(&f)
            .expect("solved F-block admits hexagon solutions")
            .canonical
            .matrix();
        Self::new(f, r).expect("solved data is unitary")
    }

    /// `σ_index^{±1}`.
    pub fn generator(&self, index: usize, inverse: bool) -> Result<&Mat4> {
        if !(1..=5).contains(&index) {
            return Err(Error::GeneratorRange(index as i64));
        }
        Ok(if inverse {
            &self.inverses[index - 1]
        } else {
            &self.generators[index - 1]
        })
    }

    pub fn bmatrix(&self) -> Mat2 {
        self.f.adjoint() * self.r * self.f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, gates};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn rep() -> DefectRepresentation {
        DefectRepresentation::solved()
    }

    #[test]
    fn basis_matches_brute_force() {
        let brute: Vec<Vec<Channel>> = pair_channel_assignments(3);
        assert_eq!(brute.len(), 4);
        let basis = enumerate_basis();
        for s in &basis {
            assert!(brute.contains(&vec![s.a, s.c, s.b]));
            assert!(s.is_admissible());
        }
        let names: Vec<String> = basis.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["(1,1,1)", "(1,f,f)", "(f,f,1)", "(f,1,f)"]);
        let odd = PairChannelBasis {
            a: Channel::Vacuum,
            c: Channel::Vacuum,
            b: Channel::Fermion,
        };
        assert!(!odd.is_admissible());
        for n in 1..8 {
            assert_eq!(pair_channel_assignments(n).len(), 1 << (n - 1));
        }
    }

    #[test]
    fn bmatrix_closed_form() {
        let rep = rep();
        let expected = Mat2::new(ONE, -linalg::I, -linalg::I, ONE) * (cis(FRAC_PI_8) / 2f64.sqrt());
        let b = bmatrix(&rep.f, &rep.r).unwrap();
        assert!(linalg::max_abs_diff(&b, &expected) < 1e-12);
        assert!(linalg::unitarity_defect(&b) < 1e-12);
        let id = Mat2::identity();
        assert_eq!(bmatrix(&id, &id).unwrap(), id);
        assert!(bmatrix(&(id * C64::new(2.0, 0.0)), &id).is_err());
    }

    #[test]
    fn squares_give_paulis() {
        let rep = rep();
        let s1 = rep.generator(1, false).unwrap();
        let z1 = kron(&gates::z(), &gates::identity()) * cis(-FRAC_PI_4);
        assert!(linalg::max_abs_diff(&(s1 * s1), &z1) < 1e-12);
        let s2 = rep.generator(2, false).unwrap();
        let x1 = kron(&gates::x(), &gates::identity());
        assert!(linalg::trace_fidelity(&(s2 * s2), &x1) > 1.0 - 1e-12);
    }

    #[test]
    fn cz_from_three_diagonals() {
        let rep = rep();
        let m = rep.generator(1, true).unwrap()
            * rep.generator(3, false).unwrap()
            * rep.generator(5, true).unwrap();
        let expected = gates::cz() * cis(FRAC_PI_8);
        assert!(linalg::max_abs_diff(&m, &expected) < 1e-12);
    }

    #[test]
    fn generator_range() {
        let rep = rep();
        for bad in [0, 6, -1] {
            assert!(matches!(
                braid_generator(bad, &rep.f, &rep.r),
                Err(Error::GeneratorRange(_))
            ));
        }
    }

    #[test]
    fn braid_relations() {
        let rep = rep();
        let g = |i, inv| *rep.generator(i, inv).unwrap();
        for inv in [false, true] {
            for i in 1..=5 {
                assert!(linalg::unitarity_defect(&g(i, inv)) < 1e-12);
                for j in i + 2..=5 {
                    let d = g(i, inv) * g(j, inv) - g(j, inv) * g(i, inv);
                    assert!(linalg::operator_norm(&d) < 1e-12);
                }
                if i < 5 {
                    let (a, b) = (g(i, inv), g(i + 1, inv));
                    assert!(linalg::operator_norm(&(a * b * a - b * a * b)) < 1e-12);
                }
                let eighth = g(i, inv).pow(8);
                assert!((linalg::trace_fidelity(&eighth, &Mat4::identity()) - 1.0).abs() < 1e-10);
            }
        }
    }
}
