//! Braid words, their compiled unitaries, the named gate library and the
//! two-qubit Grover demonstration.
//!
//! A word `t₁ t₂ … tₙ` compiles to `M(t₁)·M(t₂)·…·M(tₙ)`, so the rightmost
//! token acts on the state first.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use nalgebra::{Dim, Matrix, RawStorage, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion_space::{DefectRepresentation, FusionBasisState};
use crate::linalg::{self, gates, kron, Mat2, Mat4, C64};

/// `σ_generator^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BraidToken {
    pub generator: usize,
    pub exponent: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord {
    tokens: Vec<BraidToken>,
}

impl BraidWord {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Word from `(generator, exponent)` pairs.
    pub fn new(tokens: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let tokens = tokens
            .into_iter()
            .map(|(g, e)| {
                if !(1..=5).contains(&g) {
                    return Err(Error::GeneratorRange(g));
                }
                if e == 0 {
                    return Err(Error::Parameter(format!("zero exponent on s{g}")));
                }
                Ok(BraidToken {
                    generator: g as usize,
                    exponent: e,
                })
            })
            .collect::<Result<_>>()?;
        Ok(BraidWord { tokens })
    }

    pub fn tokens(&self) -> &[BraidToken] {
        &self.tokens
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Number of elementary crossings, counting exponents.
    pub fn crossings(&self) -> usize {
        self.tokens
            .iter()
            .map(|t| t.exponent.unsigned_abs() as usize)
            .sum()
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            tokens: self
                .tokens
                .iter()
                .rev()
                .map(|t| BraidToken {
                    generator: t.generator,
                    exponent: -t.exponent,
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Self {
        let mut tokens = self.tokens.clone();
        tokens.extend_from_slice(&other.tokens);
        BraidWord { tokens }
    }

    /// Parses whitespace-separated `s<i>` / `s<i>^<k>` tokens.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for (i, raw) in text.split_whitespace().enumerate() {
            let fail = |reason: &str| Error::Parse {
                position: i + 1,
                token: raw.to_string(),
                reason: reason.to_string(),
            };
            let body = raw
                .strip_prefix('s')
                .ok_or_else(|| fail("expected a token of the form s<i> or s<i>^<k>"))?;
            let (index, exponent) = match body.split_once('^') {
                Some((idx, exp)) => (
                    idx,
                    exp.parse::<i64>().map_err(|_| fail("malformed exponent"))?,
                ),
                None => (body, 1),
            };
            let generator: i64 = index
                .parse()
                .map_err(|_| fail("malformed generator index"))?;
            if !(1..=5).contains(&generator) {
                return Err(fail("generator index outside 1..=5"));
            }
            if exponent == 0 {
                return Err(fail("zero exponent"));
            }
            tokens.push(BraidToken {
                generator: generator as usize,
                exponent,
            });
        }
        Ok(BraidWord { tokens })
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Canonical text with exponents expanded into repeated `s<i>` or `s<i>^-1`.
impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.tokens {
            for _ in 0..t.exponent.unsigned_abs() {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "s{}", t.generator)?;
                if t.exponent < 0 {
                    f.write_str("^-1")?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for BraidWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add for BraidWord {
    type Output = BraidWord;

    fn add(mut self, rhs: BraidWord) -> BraidWord {
        self.tokens.extend(rhs.tokens);
        self
    }
}

pub fn compile(rep: &DefectRepresentation, word: &BraidWord) -> Result<Mat4> {
    let mut u = Mat4::identity();
    for t in word.tokens() {
        let g = rep.generator(t.generator, t.exponent < 0)?;
        for _ in 0..t.exponent.unsigned_abs() {
            u *= g;
        }
    }
    Ok(u)
}

/// Projective comparison of two unitaries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseEquivalence {
    pub equivalent: bool,
    pub fidelity: f64,
}

/// `|Tr(U†V)| / d ≥ 1 − tol`.
pub fn equiv_up_to_phase<R1, C1, S1, R2, C2, S2>(
    u: &Matrix<C64, R1, C1, S1>,
    v: &Matrix<C64, R2, C2, S2>,
    tol: f64,
) -> Result<PhaseEquivalence>
where
    R1: Dim,
    C1: Dim,
    S1: RawStorage<C64, R1, C1>,
    R2: Dim,
    C2: Dim,
    S2: RawStorage<C64, R2, C2>,
{
    let d = u.nrows();
    if u.ncols() != d || v.nrows() != d || v.ncols() != d {
        return Err(Error::Shape(format!(
            "cannot compare {}x{} with {}x{}",
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    let mut tr = C64::new(0.0, 0.0);
    for r in 0..d {
        for c in 0..d {
            tr += u[(r, c)].conj() * v[(r, c)];
        }
    }
    let fidelity = tr.norm() / d as f64;
    Ok(PhaseEquivalence {
        equivalent: fidelity >= 1.0 - tol,
        fidelity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GateName {
    X1,
    X2,
    Z1,
    Z2,
    H1,
    H2,
    CZ,
}

impl GateName {
    pub const ALL: [GateName; 7] = [
        GateName::X1,
        GateName::Z1,
        GateName::X2,
        GateName::Z2,
        GateName::H1,
        GateName::H2,
        GateName::CZ,
    ];

    pub fn word(self) -> BraidWord {
        let pairs: &[(i64, i64)] = match self {
            GateName::X1 => &[(2, 2)],
            GateName::Z1 => &[(1, 2)],
            GateName::X2 => &[(4, 2)],
            GateName::Z2 => &[(5, 2)],
            GateName::H1 => &[(1, 1), (2, 1), (1, 1)],
            GateName::H2 => &[(5, 1), (4, 1), (5, 1)],
            GateName::CZ => &[(1, -1), (3, 1), (5, -1)],
        };
        BraidWord::new(pairs.iter().copied()).expect("library words are valid")
    }

    pub fn reference(self) -> Mat4 {
        let id = gates::identity();
        let on_first = |g: Mat2| kron(&g, &id);
        let on_second = |g: Mat2| kron(&id, &g);
        match self {
            GateName::X1 => on_first(gates::x()),
            GateName::Z1 => on_first(gates::z()),
            GateName::H1 => on_first(gates::hadamard()),
            GateName::X2 => on_second(gates::x()),
            GateName::Z2 => on_second(gates::z()),
            GateName::H2 => on_second(gates::hadamard()),
            GateName::CZ => gates::cz(),
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for GateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateName::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown gate `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    pub name: GateName,
    pub word: BraidWord,
    pub reference_matrix: Mat4,
}

pub fn gate_library() -> Vec<GateSpec> {
    GateName::ALL
        .into_iter()
        .map(|name| GateSpec {
            name,
            word: name.word(),
            reference_matrix: name.reference(),
        })
        .collect()
}

pub fn simulate(
    rep: &DefectRepresentation,
    word: &BraidWord,
    initial: &FusionBasisState,
) -> Result<FusionBasisState> {
    let norm = initial.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "initial state has norm {norm}, expected 1"
        )));
    }
    let u = compile(rep, word)?;
    Ok(FusionBasisState::new(u * initial.amplitudes))
}

/// Outcome probabilities over `00, 01, 10, 11`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementResult {
    pub distribution: [f64; 4],
}

impl MeasurementResult {
    pub fn probability(&self, outcome: usize) -> f64 {
        self.distribution[outcome]
    }
}

pub fn measure(state: &FusionBasisState) -> MeasurementResult {
    let v: Vector4<C64> = state.amplitudes;
    MeasurementResult {
        distribution: [0, 1, 2, 3].map(|i| v[i].norm_sqr()),
    }
}

/// Phase flip of the basis state `target` built from the gate library:
/// X on every qubit whose target bit is 0, then CZ, then the same X gates.
pub fn phase_oracle(target: usize) -> Result<BraidWord> {
    if target > 3 {
        return Err(Error::Parameter(format!("target {target} outside 0..=3")));
    }
    let mut flips = BraidWord::empty();
    if target & 0b10 == 0 {
        flips = flips + GateName::X1.word();
    }
    if target & 0b01 == 0 {
        flips = flips + GateName::X2.word();
    }
    Ok(flips.clone() + GateName::CZ.word() + flips)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverRun {
    pub target: usize,
    pub word: BraidWord,
    #[serde(skip)]
    pub state: FusionBasisState,
    pub measurement: MeasurementResult,
}

/// One Grover iteration on `|00⟩`: prepare with H1·H2, apply the target
/// oracle, then diffuse with H1·H2·oracle(00)·H1·H2.
pub fn grover_braid_for(rep: &DefectRepresentation, target: usize) -> Result<GroverRun> {
    let hh = GateName::H1.word() + GateName::H2.word();
    let diffusion = hh.clone() + phase_oracle(0)? + hh.clone();
    let word = diffusion + phase_oracle(target)? + hh;
    let state = simulate(rep, &word, &FusionBasisState::basis(0))?;
    Ok(GroverRun {
        target,
        measurement: measure(&state),
        state,
        word,
    })
}

pub fn grover_braid(rep: &DefectRepresentation) -> (BraidWord, MeasurementResult) {
    let run = grover_braid_for(rep, 0).expect("target 00 is valid");
    (run.word, run.measurement)
}

/// Compiled unitary as rows of `[re, im]` pairs.
pub fn unitary_grid(u: &Mat4) -> Vec<Vec<[f64; 2]>> {
    linalg::to_grid(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, ONE};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn rep() -> DefectRepresentation {
        DefectRepresentation::solved()
    }

    #[test]
    fn parse_and_format() {
        let w = BraidWord::parse("s1^-1 s3 s5^-1").unwrap();
        assert_eq!(w, GateName::CZ.word());
        assert_eq!(w.to_string(), "s1^-1 s3 s5^-1");
        assert_eq!(GateName::X1.word().to_string(), "s2 s2");
        assert_eq!(BraidWord::parse("s2^2").unwrap().to_string(), "s2 s2");
        assert_eq!(BraidWord::parse("  ").unwrap(), BraidWord::empty());
        match BraidWord::parse("s9") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("{other:?}"),
        }
        match BraidWord::parse("s1 s2 x3") {
            Err(Error::Parse {
                position, token, ..
            }) => assert_eq!((position, token.as_str()), (3, "x3")),
            other => panic!("{other:?}"),
        }
        assert!(BraidWord::parse("s1^0").is_err());
        assert!(BraidWord::new([(6, 1)]).is_err());
    }

    #[test]
    fn compile_examples() {
        let rep = rep();
        assert_eq!(
            compile(&rep, &BraidWord::empty()).unwrap(),
            Mat4::identity()
        );
        let z1 = compile(&rep, &GateName::Z1.word()).unwrap();
        let expected = kron(&gates::z(), &gates::identity()) * cis(-FRAC_PI_4);
        assert!(linalg::max_abs_diff(&z1, &expected) < 1e-12);
    }

    #[test]
    fn library_gates_match_references() {
        let rep = rep();
        let lib = gate_library();
        assert_eq!(lib.len(), 7);
        for g in lib {
            let u = compile(&rep, &g.word).unwrap();
            let eq = equiv_up_to_phase(&u, &g.reference_matrix, 1e-10).unwrap();
            assert!(eq.equivalent, "{}: {}", g.name, eq.fidelity);
        }
    }

    #[test]
    fn phase_equivalence_examples() {
        let u = kron(&gates::hadamard(), &gates::x());
        let eq = equiv_up_to_phase(&u, &(u * cis(1.3)), 1e-12).unwrap();
        assert!(eq.equivalent && (eq.fidelity - 1.0).abs() < 1e-12);
        let zi = GateName::Z1.reference();
        let xi = GateName::X1.reference();
        let eq = equiv_up_to_phase(&zi, &xi, 1e-10).unwrap();
        assert!(!eq.equivalent && eq.fidelity == 0.0);
        assert!(matches!(
            equiv_up_to_phase(&zi, &Mat2::identity(), 1e-10),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn simulate_examples() {
        let rep = rep();
        let zero = FusionBasisState::basis(0);
        assert_eq!(simulate(&rep, &BraidWord::empty(), &zero).unwrap(), zero);

        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let plus = FusionBasisState::new(Vector4::new(h, C64::default(), h, C64::default()));
        let minus = FusionBasisState::new(Vector4::new(h, C64::default(), -h, C64::default()));
        let out = simulate(&rep, &GateName::Z1.word(), &plus).unwrap();
        assert!((out.overlap(&minus) - 1.0).abs() < 1e-12);
        let out = simulate(&rep, &GateName::H1.word(), &zero).unwrap();
        assert!((out.overlap(&plus) - 1.0).abs() < 1e-12);

        let unnormalized =
            FusionBasisState::new(Vector4::new(ONE, ONE, C64::default(), C64::default()));
        assert!(matches!(
            simulate(&rep, &BraidWord::empty(), &unnormalized),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn measure_examples() {
        assert_eq!(
            measure(&FusionBasisState::basis(0)).distribution,
            [1.0, 0.0, 0.0, 0.0]
        );
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let bell = FusionBasisState::new(Vector4::new(h, C64::default(), C64::default(), h));
        let d = measure(&bell).distribution;
        for (got, want) in d.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn grover_finds_every_target() {
        let rep = rep();
        let (_, m) = grover_braid(&rep);
        assert!((m.probability(0) - 1.0).abs() < 1e-9);
        for target in 0..4 {
            let run = grover_braid_for(&rep, target).unwrap();
            assert!((run.measurement.probability(target) - 1.0).abs() < 1e-9);
            assert!((run.measurement.distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(phase_oracle(3).unwrap(), GateName::CZ.word());
        let prep = GateName::H1.word() + GateName::H2.word();
        let uniform = measure(&simulate(&rep, &prep, &FusionBasisState::basis(0)).unwrap());
        for p in uniform.distribution {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }
}
