//! Anyon label sets, fusion rings and modular data.
//!
//! A model is plain data: a list of labels, an integer fusion table
//! `N^{ab}_c` and, optionally, the modular `(S, T)` pair of its bulk sector.
//! The first label is the unit. When modular data is present it covers the
//! first `S.len()` labels, so bulk anyons must be listed before defects.
//!
//! The built-in model is the toric code `{1, e, m, f}` extended by the two
//! twist defects `x+`, `x-` (written χ± elsewhere):
//!
//! ```text
//! e⊗e = m⊗m = f⊗f = 1    e⊗m = f
//! x±⊗x± = 1 ⊕ f          x±⊗x∓ = e ⊕ m
//! e⊗x± = m⊗x± = x∓       f⊗x± = x±
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Name of an anyon type, e.g. `"e"` or `"x+"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AnyonLabel(pub String);

impl AnyonLabel {
    pub fn new(name: impl Into<String>) -> Self {
        AnyonLabel(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AnyonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Position of a label inside its model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LabelId(pub usize);

impl LabelId {
    pub const UNIT: LabelId = LabelId(0);

    pub fn index(self) -> usize {
        self.0
    }
}

/// Dense table of fusion multiplicities `N^{ab}_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionTable {
    rank: usize,
    n: Vec<u32>,
}

impl FusionTable {
    pub fn zeros(rank: usize) -> Self {
        FusionTable {
            rank,
            n: vec![0; rank * rank * rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn offset(&self, a: LabelId, b: LabelId, c: LabelId) -> usize {
        (a.0 * self.rank + b.0) * self.rank + c.0
    }

    pub fn get(&self, a: LabelId, b: LabelId, c: LabelId) -> u32 {
        self.n[self.offset(a, b, c)]
    }

    pub fn set(&mut self, a: LabelId, b: LabelId, c: LabelId, multiplicity: u32) {
        let at = self.offset(a, b, c);
        self.n[at] = multiplicity;
    }

    /// Channels `c` with `N^{ab}_c ≥ 1`, in label order.
    pub fn channels(&self, a: LabelId, b: LabelId) -> impl Iterator<Item = (LabelId, u32)> + '_ {
        let base = (a.0 * self.rank + b.0) * self.rank;
        self.n[base..base + self.rank]
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(c, &m)| (LabelId(c), m))
    }

    pub fn admits(&self, a: LabelId, b: LabelId, c: LabelId) -> bool {
        self.get(a, b, c) > 0
    }
}

/// Modular `(S, T)` data of the bulk sector.
///
/// `S` is kept exact as rationals; `T` is a diagonal of unit-modulus phases.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularData {
    pub s: Vec<Vec<Rational64>>,
    pub t: Vec<C64>,
}

impl ModularData {
    pub fn size(&self) -> usize {
        self.s.len()
    }

    pub fn s_f64(&self) -> Vec<Vec<f64>> {
        self.s
            .iter()
            .map(|row| row.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

/// A fusion ring with optional modular data.
#[derive(Clone, Debug, PartialEq)]
pub struct AnyonModel {
    labels: Vec<AnyonLabel>,
    fusion: FusionTable,
    modular: Option<ModularData>,
}

/// One fusion channel with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionOutcome {
    pub label: AnyonLabel,
    pub multiplicity: u32,
}

/// The fusion-ring law a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    UniqueLabels,
    Unit,
    Nonempty,
    Commutativity,
    Associativity,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: Law,
    pub detail: String,
}

/// Result of [`AnyonModel::validate`]; empty when every law holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

impl AnyonModel {
    pub fn new(
        labels: Vec<AnyonLabel>,
        fusion: FusionTable,
        modular: Option<ModularData>,
    ) -> Result<Self> {
        if fusion.rank() != labels.len() {
            return Err(Error::ModelSpec(format!(
                "fusion table rank {} does not match {} labels",
                fusion.rank(),
                labels.len()
            )));
        }
        if let Some(md) = &modular {
            let k = md.size();
            if k > labels.len() || md.s.iter().any(|row| row.len() != k) || md.t.len() != k {
                return Err(Error::ModelSpec(format!(
                    "modular data must be square over at most {} labels",
                    labels.len()
                )));
            }
        }
        Ok(AnyonModel {
            labels,
            fusion,
            modular,
        })
    }

    /// Toric code `{1, e, m, f}` with its modular data.
    pub fn toric_code() -> Self {
        Self::build(&["1", "e", "m", "f"], true)
    }

    /// Toric code extended by the twist defects `x+`, `x-`.
    pub fn z2_defect() -> Self {
        Self::build(&["1", "e", "m", "f", "x+", "x-"], true)
    }

    fn build(names: &[&str], with_modular: bool) -> Self {
        // Bulk anyons are Z2×Z2 elements (e-charge, m-charge); defects carry
        // the Z2 flag that e and m toggle.
        fn bulk(name: &str) -> Option<(u8, u8)> {
            match name {
                "1" => Some((0, 0)),
                "e" => Some((1, 0)),
                "m" => Some((0, 1)),
                "f" => Some((1, 1)),
                _ => None,
            }
        }
        fn defect(name: &str) -> Option<u8> {
            match name {
                "x+" => Some(0),
                "x-" => Some(1),
                _ => None,
            }
        }
        let find = |pred: &dyn Fn(&str) -> bool| names.iter().position(|n| pred(n)).map(LabelId);
        let bulk_id = |g: (u8, u8)| find(&|n| bulk(n) == Some(g)).expect("bulk label");
        let defect_id = |s: u8| find(&|n| defect(n) == Some(s)).expect("defect label");

        let mut table = FusionTable::zeros(names.len());
        for (i, a) in names.iter().enumerate() {
            for (j, b) in names.iter().enumerate() {
                let (a_id, b_id) = (LabelId(i), LabelId(j));
                match (bulk(a), bulk(b), defect(a), defect(b)) {
                    (Some(x), Some(y), _, _) => {
                        table.set(a_id, b_id, bulk_id((x.0 ^ y.0, x.1 ^ y.1)), 1);
                    }
                    (Some(g), None, _, Some(s)) | (None, Some(g), Some(s), _) => {
                        table.set(a_id, b_id, defect_id(s ^ g.0 ^ g.1), 1);
                    }
                    (None, None, Some(s), Some(t)) if s == t => {
                        table.set(a_id, b_id, bulk_id((0, 0)), 1);
                        table.set(a_id, b_id, bulk_id((1, 1)), 1);
                    }
                    (None, None, Some(_), Some(_)) => {
                        table.set(a_id, b_id, bulk_id((1, 0)), 1);
                        table.set(a_id, b_id, bulk_id((0, 1)), 1);
                    }
                    _ => unreachable!("unknown built-in label"),
                }
            }
        }
        let modular = with_modular.then(|| {
            let half = Rational64::new(1, 2);
            let s = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&x| half * Rational64::from_integer(x))
                        .collect()
                })
                .collect();
            let one = C64::new(1.0, 0.0);
            ModularData {
                s,
                t: vec![one, one, one, -one],
            }
        });
        AnyonModel::new(
            names.iter().map(|n| AnyonLabel::new(*n)).collect(),
            table,
            modular,
        )
        .expect("built-in model is well formed")
    }

    pub fn labels(&self) -> &[AnyonLabel] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = LabelId> + Clone {
        (0..self.labels.len()).map(LabelId)
    }

    pub fn fusion(&self) -> &FusionTable {
        &self.fusion
    }

    pub fn modular(&self) -> Option<&ModularData> {
        self.modular.as_ref()
    }

    pub fn modular_mut(&mut self) -> Option<&mut ModularData> {
        self.modular.as_mut()
    }

    pub fn fusion_mut(&mut self) -> &mut FusionTable {
        &mut self.fusion
    }

    pub fn id(&self, name: &str) -> Result<LabelId> {
        self.labels
            .iter()
            .position(|l| l.0 == name)
            .map(LabelId)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn name(&self, id: LabelId) -> &str {
        &self.labels[id.0].0
    }

    pub fn unit(&self) -> LabelId {
        LabelId::UNIT
    }

    /// Fusion multiset of two labels given by name.
    pub fn fuse(&self, a: &str, b: &str) -> Result<Vec<FusionOutcome>> {
        let (a, b) = (self.id(a)?, self.id(b)?);
        Ok(self
            .fusion
            .channels(a, b)
            .map(|(c, m)| FusionOutcome {
                label: self.labels[c.0].clone(),
                multiplicity: m,
            })
            .collect())
    }

    /// The unique `b` with `1 ∈ a⊗b`, if there is exactly one.
    pub fn dual(&self, a: LabelId) -> Option<LabelId> {
        let mut duals = self
            .ids()
            .filter(|&b| self.fusion.get(a, b, LabelId::UNIT) == 1);
        let first = duals.next()?;
        duals.next().is_none().then_some(first)
    }

    /// Checks the fusion-ring axioms by exhaustive enumeration.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut push = |law, detail: String| violations.push(Violation { law, detail });
        let n = &self.fusion;
        let ids: Vec<LabelId> = self.ids().collect();

        let mut seen = HashSet::new();
        for l in &self.labels {
            if !seen.insert(&l.0) {
                push(Law::UniqueLabels, format!("label `{l}` listed twice"));
            }
        }

        let unit = LabelId::UNIT;
        for &a in &ids {
            for (x, y) in [(unit, a), (a, unit)] {
                for &c in &ids {
                    let expected = u32::from(c == a);
                    if n.get(x, y, c) != expected {
                        push(
                            Law::Unit,
                            format!(
                                "N^{{{},{}}}_{} = {}, expected {}",
                                self.name(x),
                                self.name(y),
                                self.name(c),
                                n.get(x, y, c),
                                expected
                            ),
                        );
                    }
                }
            }
        }

        for &a in &ids {
            for &b in &ids {
                if n.channels(a, b).next().is_none() {
                    push(
                        Law::Nonempty,
                        format!("{} ⊗ {} is empty", self.name(a), self.name(b)),
                    );
                }
                for &c in &ids {
                    if n.get(a, b, c) != n.get(b, a, c) {
                        push(
                            Law::Commutativity,
                            format!(
                                "N^{{{a},{b}}}_{c} = {} but N^{{{b},{a}}}_{c} = {}",
                                n.get(a.min(b), a.max(b), c),
                                n.get(a.max(b), a.min(b), c),
                                a = self.name(a.min(b)),
                                b = self.name(a.max(b)),
                                c = self.name(c)
                            ),
                        );
                    }
                }
            }
        }
        // Each unordered commutativity failure was reported from both sides.
        let mut seen = HashSet::new();
        violations.retain(|v| v.law != Law::Commutativity || seen.insert(v.detail.clone()));
        let mut push = |law, detail: String| violations.push(Violation { law, detail });

        for &a in &ids {
            for &b in &ids {
                for &c in &ids {
                    for &d in &ids {
                        let left: u64 = ids
                            .iter()
                            .map(|&e| u64::from(n.get(a, b, e)) * u64::from(n.get(e, c, d)))
                            .sum();
                        let right: u64 = ids
                            .iter()
                            .map(|&f| u64::from(n.get(b, c, f)) * u64::from(n.get(a, f, d)))
                            .sum();
                        if left != right {
                            push(
                                Law::Associativity,
                                format!(
                                    "({}⊗{})⊗{} contains {} {} times, {}⊗({}⊗{}) {} times",
                                    self.name(a),
                                    self.name(b),
                                    self.name(c),
                                    self.name(d),
                                    left,
                                    self.name(a),
                                    self.name(b),
                                    self.name(c),
                                    right
                                ),
                            );
                        }
                    }
                }
            }
        }

        for &a in &ids {
            if self.dual(a).is_none() {
                push(Law::Dual, format!("{} has no unique dual", self.name(a)));
            }
        }

        ValidationReport { violations }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidModel(
                report.violations.into_iter().map(|v| v.detail).collect(),
            ))
        }
    }

    /// Frobenius–Perron eigenvalue of `(N_a)_{bc} = N^{ab}_c`.
    pub fn quantum_dimension(&self, a: &str) -> Result<f64> {
        let a = self.id(a)?;
        self.require_valid()?;
        Ok(self.fp_eigenvalue(a))
    }

    /// Quantum dimensions of every label, in label order.
    pub fn quantum_dimensions(&self) -> Result<Vec<f64>> {
        self.require_valid()?;
        Ok(self.ids().map(|a| self.fp_eigenvalue(a)).collect())
    }

    fn fp_eigenvalue(&self, a: LabelId) -> f64 {
        const TOL: f64 = 1e-14;
        const MAX_ITER: usize = 1_000_000;
        let k = self.rank();
        // Power iteration on N_a + I: the shift makes irreducible blocks
        // aperiodic (permutation-like N_a would otherwise oscillate).
        let apply = |v: &[f64]| -> Vec<f64> {
            (0..k)
                .map(|b| {
                    v[b] + self
                        .fusion
                        .channels(a, LabelId(b))
                        .map(|(c, m)| f64::from(m) * v[c.0])
                        .sum::<f64>()
                })
                .collect()
        };
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut v = vec![1.0 / (k as f64).sqrt(); k];
        let mut lambda = 0.0;
        for _ in 0..MAX_ITER {
            let w = apply(&v);
            let next = norm(&w);
            let w: Vec<f64> = w.iter().map(|x| x / next).collect();
            let settled = (next - lambda).abs() < TOL
                && w.iter().zip(&v).all(|(x, y)| (x - y).abs() < TOL.sqrt());
            lambda = next;
            v = w;
            if settled {
                break;
            }
        }
        lambda - 1.0
    }

    /// Parses the JSON model-spec format.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(text)?;
        spec.try_into()
    }

    pub fn to_spec(&self) -> ModelSpec {
        let mut fusion = BTreeMap::new();
        for a in self.ids() {
            for b in self.ids() {
                let mut out = Vec::new();
                for (c, m) in self.fusion.channels(a, b) {
                    out.extend(std::iter::repeat_n(self.name(c).to_string(), m as usize));
                }
                fusion.insert(format!("{},{}", self.name(a), self.name(b)), out);
            }
        }
        let (s, t) = match &self.modular {
            Some(md) => (
                Some(
                    md.s.iter()
                        .map(|row| row.iter().map(|q| SpecEntry::from_rational(*q)).collect())
                        .collect(),
                ),
                Some(md.t.iter().map(|z| SpecEntry::from_complex(*z)).collect()),
            ),
            None => (None, None),
        };
        ModelSpec {
            labels: self.labels.iter().map(|l| l.0.clone()).collect(),
            fusion,
            s,
            t,
        }
    }
}

/// On-disk model description:
/// `{"labels":[...], "fusion":{"a,b":["c",...]}, "s":[[...]], "t":[...]}`.
///
/// A pair listed only as `"a,b"` is also used for `"b,a"`. Repeating a label
/// in a channel list raises its multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub labels: Vec<String>,
    pub fusion: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<Vec<SpecEntry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<SpecEntry>>,
}

/// A matrix entry: a number, a `"p/q"` string, or an `[re, im]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecEntry {
    Number(f64),
    Text(String),
    Pair([f64; 2]),
}

impl SpecEntry {
    fn from_rational(q: Rational64) -> Self {
        if q.is_integer() {
            SpecEntry::Number(*q.numer() as f64)
        } else {
            SpecEntry::Text(format!("{}/{}", q.numer(), q.denom()))
        }
    }

    fn from_complex(z: C64) -> Self {
        if z.im == 0.0 {
            SpecEntry::Number(z.re)
        } else {
            SpecEntry::Pair([z.re, z.im])
        }
    }

    fn to_rational(&self) -> Result<Rational64> {
        // Floats are only accepted when they spell a small-denominator ratio.
        let exact = |x: f64| {
            (1..=MAX_DENOMINATOR)
                .find_map(|den| {
                    let num = (x * den as f64).round();
                    (num.abs() < 1e15 && num / den as f64 == x)
                        .then(|| Rational64::new(num as i64, den))
                })
                .ok_or_else(|| Error::ModelSpec(format!("S entry {x} is not an exact rational")))
        };
        match self {
            SpecEntry::Number(x) => exact(*x),
            SpecEntry::Pair([re, im]) if *im == 0.0 => exact(*re),
            SpecEntry::Pair(p) => Err(Error::ModelSpec(format!(
                "complex S entry {p:?} not supported"
            ))),
            SpecEntry::Text(s) => parse_ratio(s),
        }
    }

    fn to_complex(&self) -> Result<C64> {
        match self {
            SpecEntry::Number(x) => Ok(C64::new(*x, 0.0)),
            SpecEntry::Pair([re, im]) => Ok(C64::new(*re, *im)),
            SpecEntry::Text(s) => {
                parse_ratio(s).map(|q| C64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))
            }
        }
    }
}

const MAX_DENOMINATOR: i64 = 4096;

fn parse_ratio(s: &str) -> Result<Rational64> {
    let bad = || Error::ModelSpec(format!("cannot parse `{s}` as a rational"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational64::new(num, den))
}

impl TryFrom<ModelSpec> for AnyonModel {
    type Error = Error;

    fn try_from(spec: ModelSpec) -> Result<Self> {
        if spec.labels.is_empty() {
            return Err(Error::ModelSpec("no labels".into()));
        }
        let index = |name: &str| -> Result<LabelId> {
            spec.labels
                .iter()
                .position(|l| l == name)
                .map(LabelId)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))
        };
        let mut table = FusionTable::zeros(spec.labels.len());
        let mut given = HashSet::new();
        for (key, outs) in &spec.fusion {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| Error::ModelSpec(format!("fusion key `{key}` is not `a,b`")))?;
            let (a, b) = (index(a.trim())?, index(b.trim())?);
            given.insert((a, b));
            for c in outs {
                let c = index(c)?;
                table.set(a, b, c, table.get(a, b, c) + 1);
            }
        }
        for &(a, b) in &given {
            if !given.contains(&(b, a)) {
                for c in (0..spec.labels.len()).map(LabelId) {
                    table.set(b, a, c, table.get(a, b, c));
                }
            }
        }
        let modular = match (spec.s, spec.t) {
            (None, None) => None,
            (Some(s), Some(t)) => Some(ModularData {
                s: s.iter()
                    .map(|row| {
                        row.iter()
                            .map(SpecEntry::to_rational)
                            .collect::<Result<_>>()
                    })
                    .collect::<Result<_>>()?,
                t: t.iter().map(SpecEntry::to_complex).collect::<Result<_>>()?,
            }),
            _ => {
                return Err(Error::ModelSpec(
                    "`s` and `t` must be given together".into(),
                ))
            }
        };
        AnyonModel::new(
            spec.labels.into_iter().map(AnyonLabel).collect(),
            table,
            modular,
        )
    }
}

/// Options for [`verify_modular_data`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ModularChecks {
    /// Also require `(ST)³ ∝ S²`.
    pub st_cubed: bool,
}

/// Outcome of [`verify_modular_data`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularReport {
    pub s_symmetric: bool,
    pub s_unitary: bool,
    pub s_squared_is_conjugation: bool,
    pub t_unit_diagonal: bool,
    pub verlinde_exact: bool,
    /// Largest distance of a Verlinde sum from the nearest integer.
    pub verlinde_max_deviation: f64,
    pub st_cubed: Option<bool>,
    pub violations: Vec<String>,
}

impl ModularReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the modular data of `model` against its own fusion table.
///
/// Symmetry, unitarity and `S² = C` are exact rational checks. The Verlinde
/// formula `N^{ab}_c = Σ_x S_ax S_bx S̄_cx / S_1x` runs in floating point and
/// must round to the stored multiplicities.
pub fn verify_modular_data(model: &AnyonModel, checks: ModularChecks) -> Result<ModularReport> {
    let md = model.modular().ok_or(Error::NoModularData)?;
    let k = md.size();
    let s = &md.s;
    let mut violations = Vec::new();

    let s_symmetric = (0..k).all(|i| (0..k).all(|j| s[i][j] == s[j][i]));
    if !s_symmetric {
        violations.push("S is not symmetric".to_string());
    }

    let product = |a: &[Vec<Rational64>], b: &[Vec<Rational64>], transpose_b: bool| {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..k)
                            .map(|x| a[i][x] * if transpose_b { b[j][x] } else { b[x][j] })
                            .fold(Rational64::zero(), |acc, v| acc + v)
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };

    // Real S: S S† = S Sᵀ.
    let sst = product(s, s, true);
    let s_unitary = (0..k).all(|i| {
        (0..k).all(|j| {
            sst[i][j]
                == if i == j {
                    Rational64::one()
                } else {
                    Rational64::zero()
                }
        })
    });
    if !s_unitary {
        violations.push("S is not unitary".to_string());
    }

    let s2 = product(s, s, false);
    let duals: Vec<Option<usize>> = (0..k)
        .map(|a| model.dual(LabelId(a)).map(LabelId::index))
        .collect();
    let s_squared_is_conjugation = (0..k).all(|i| {
        (0..k).all(|j| {
            let c = if duals[i] == Some(j) {
                Rational64::one()
            } else {
                Rational64::zero()
            };
            s2[i][j] == c
        })
    });
    if !s_squared_is_conjugation {
        violations.push("S² is not the charge-conjugation matrix".to_string());
    }

    let t_unit_diagonal = md.t.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12);
    if !t_unit_diagonal {
        violations.push("T has an entry off the unit circle".to_string());
    }

    let sf = md.s_f64();
    let mut verlinde_exact = true;
    let mut verlinde_max_deviation = 0.0f64;
    if sf[0].contains(&0.0) {
        verlinde_exact = false;
        violations.push("S has a zero in the vacuum row".to_string());
    } else {
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    // S is real here, so S̄ = S.
                    let value: f64 = (0..k)
                        .map(|x| sf[a][x] * sf[b][x] * sf[c][x] / sf[0][x])
                        .sum();
                    let rounded = value.round();
                    verlinde_max_deviation = verlinde_max_deviation.max((value - rounded).abs());
                    let stored = model.fusion().get(LabelId(a), LabelId(b), LabelId(c));
                    if rounded < 0.0 || rounded as u32 != stored {
                        verlinde_exact = false;
                        violations.push(format!(
                            "Verlinde gives N^{{{},{}}}_{} = {value:.6}, table has {stored}",
                            model.name(LabelId(a)),
                            model.name(LabelId(b)),
                            model.name(LabelId(c))
                        ));
                    }
                }
            }
        }
        if verlinde_max_deviation >= 1e-12 {
            verlinde_exact = false;
            violations.push(format!(
                "Verlinde sums deviate from integers by {verlinde_max_deviation:e}"
            ));
        }
    }

    let st_cubed = checks.st_cubed.then(|| {
        let st: Vec<Vec<C64>> = (0..k)
            .map(|i| (0..k).map(|j| C64::new(sf[i][j], 0.0) * md.t[j]).collect())
            .collect();
        let mul = |a: &[Vec<C64>], b: &[Vec<C64>]| -> Vec<Vec<C64>> {
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| (0..k).map(|x| a[i][x] * b[x][j]).sum())
                        .collect()
                })
                .collect()
        };
        let cube = mul(&mul(&st, &st), &st);
        // (ST)³ must be a unit multiple of C.
        let lambda = match duals[0] {
            Some(d) => cube[0][d],
            None => return false,
        };
        (lambda.norm() - 1.0).abs() < 1e-10
            && (0..k).all(|i| {
                (0..k).all(|j| {
                    let c = if duals[i] == Some(j) {
                        lambda
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    (cube[i][j] - c).norm() < 1e-10
                })
            })
    });
    if st_cubed == Some(false) {
        violations.push("(ST)³ is not proportional to S²".to_string());
    }

    Ok(ModularReport {
        s_symmetric,
        s_unitary,
        s_squared_is_conjugation,
        t_unit_diagonal,
        verlinde_exact,
        verlinde_max_deviation,
        st_cubed,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(out: &[FusionOutcome]) -> Vec<&str> {
        out.iter().map(|o| o.label.as_str()).collect()
    }

    #[test]
    fn fuse_examples() {
        let m = AnyonModel::z2_defect();
        assert_eq!(names(&m.fuse("e", "m").unwrap()), ["f"]);
        assert_eq!(names(&m.fuse("1", "x+").unwrap()), ["x+"]);
        assert_eq!(names(&m.fuse("x+", "x-").unwrap()), ["e", "m"]);
        assert_eq!(names(&m.fuse("x-", "x-").unwrap()), ["1", "f"]);
        assert_eq!(names(&m.fuse("f", "x-").unwrap()), ["x-"]);
        assert!(m.fuse("x+", "q").is_err());
    }

    #[test]
    fn builtin_models_are_valid() {
        assert!(AnyonModel::z2_defect().validate().is_valid());
        assert!(AnyonModel::toric_code().validate().is_valid());
    }

    #[test]
    fn broken_unit_is_reported() {
        let mut m = AnyonModel::z2_defect();
        let (e, one) = (m.id("e").unwrap(), m.id("1").unwrap());
        m.fusion_mut().set(e, e, one, 0);
        m.fusion_mut().set(e, e, e, 1);
        let report = m.validate();
        assert!(report.violates(Law::Unit) || report.violates(Law::Associativity));
        assert!(report.violates(Law::Associativity));
        assert!(m.quantum_dimension("e").is_err());
    }

    #[test]
    fn asymmetric_table_reports_commutativity() {
        let mut m = AnyonModel::toric_code();
        let (e, mm, f, one) = (
            m.id("e").unwrap(),
            m.id("m").unwrap(),
            m.id("f").unwrap(),
            m.id("1").unwrap(),
        );
        m.fusion_mut().set(e, mm, f, 0);
        m.fusion_mut().set(e, mm, one, 1);
        let report = m.validate();
        assert_eq!(
            report
                .violations
                .iter()
                .filter(|v| v.law == Law::Commutativity)
                .count(),
            2
        );
    }

    #[test]
    fn quantum_dimensions() {
        let m = AnyonModel::z2_defect();
        assert!((m.quantum_dimension("1").unwrap() - 1.0).abs() < 1e-12);
        assert!((m.quantum_dimension("e").unwrap() - 1.0).abs() < 1e-12);
        let d = m.quantum_dimension("x+").unwrap();
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((d * d - 2.0).abs() < 1e-12);
    }

    #[test]
    fn json_spec_accepts_half_listed_pairs_and_ratios() {
        let text = r#"{
            "labels": ["1", "a"],
            "fusion": {"1,1": ["1"], "1,a": ["a"], "a,a": ["1"]},
            "s": [["1/2", 0.5], [0.5, "-1/2"]],
            "t": [1, [0.0, 1.0]]
        }"#;
        let m = AnyonModel::from_json_str(text).unwrap();
        assert!(m.validate().is_valid());
        let md = m.modular().unwrap();
        assert_eq!(md.s[1][1], Rational64::new(-1, 2));
        assert_eq!(md.t[1], C64::new(0.0, 1.0));
    }

    #[test]
    fn json_spec_rejects_irrational_s() {
        let text = r#"{"labels":["1"],"fusion":{"1,1":["1"]},"s":[[0.7071067811865476]],"t":[1]}"#;
        assert!(matches!(
            AnyonModel::from_json_str(text),
            Err(Error::ModelSpec(_))
        ));
    }

    #[test]
    fn json_spec_round_trips() {
        let m = AnyonModel::z2_defect();
        let text = serde_json::to_string(&m.to_spec()).unwrap();
        assert_eq!(AnyonModel::from_json_str(&text).unwrap(), m);
    }
}
