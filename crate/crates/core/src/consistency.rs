//! Pentagon and hexagon consistency for the twist-defect model.
//!
//! Index conventions: `(F^{abc}_d)_{ef}` relates the left-associated tree
//! `(a⊗b → e)⊗c → d` to the right-associated tree `a⊗(b⊗c → f) → d`, and
//! `R^{ab}_c` is the clockwise exchange of `a` and `b` in channel `c`. The
//! 2×2 defect block `F^{χχχ}_χ` is indexed `[left][right]` over `(1, f)`.
//!
//! The defect model is graded like Ising × Z2: bulk anyons split into a
//! vacuum-like class `{1, e}` and a fermion-like class `{f, m}`, and every
//! F-symbol outside the defect block is a sign `κ^{[both fermion-like]}`
//! placed on the two families `F^{gχh}_χ` and `F^{χgχ}_h`, or 1.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

use rayon::prelude::*;
use serde::Serialize;

use crate::anyon_model::{AnyonModel, LabelId};
use crate::error::{Error, Result};
use crate::linalg::{self, cis, Mat2, C64, ONE, ZERO};

const TOL: f64 = 1e-12;

/// Role of a label in the Ising × Z2 grading of a defect model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    /// Invertible, in the vacuum-like class (`1`, `e`).
    Vacuum,
    /// Invertible, in the fermion-like class (`f`, `m`).
    Fermion,
    /// Non-invertible twist defect (`x±`).
    Twist,
}

impl Sector {
    fn block_index(self) -> usize {
        match self {
            Sector::Vacuum => 0,
            _ => 1,
        }
    }
}

/// Sector of every label, in label order.
///
/// Models without defects map every label to [`Sector::Vacuum`] so that all
/// F-symbols are trivial. Models with defects must have the Ising × Z2 shape:
/// the invertibles fixing the first defect are `{1, ψ}` and that defect fuses
/// with itself to `1 ⊕ ψ`.
pub fn sectors(model: &AnyonModel) -> Result<Vec<Sector>> {
    let fusion = model.fusion();
    let unit = model.unit();
    let invertible: Vec<bool> = model
        .ids()
        .map(|a| {
            model
                .dual(a)
                .is_some_and(|d| fusion.channels(a, d).collect::<Vec<_>>() == [(unit, 1)])
        })
        .collect();
    let Some(first_twist) = model.ids().find(|a| !invertible[a.0]) else {
        return Ok(vec![Sector::Vacuum; model.rank()]);
    };
    let shape_error = || Error::Precondition("model is not a Z2 twist-defect extension".into());

    let stabilizer: Vec<LabelId> = model
        .ids()
        .filter(|g| invertible[g.0])
        .filter(|&g| fusion.channels(g, first_twist).collect::<Vec<_>>() == [(first_twist, 1)])
        .collect();
    let [one, psi] = stabilizer[..] else {
        return Err(shape_error());
    };
    if one != unit {
        return Err(shape_error());
    }
    let self_fusion: Vec<_> = fusion.channels(first_twist, first_twist).collect();
    if self_fusion != [(unit, 1), (psi, 1)] && self_fusion != [(psi, 1), (unit, 1)] {
        return Err(shape_error());
    }

    // Off-stabilizer invertibles g = r·h inherit the class of h.
    let coset_rep = model
        .ids()
        .find(|g| invertible[g.0] && !stabilizer.contains(g));
    let mut out = Vec::with_capacity(model.rank());
    for g in model.ids() {
        if !invertible[g.0] {
            out.push(Sector::Twist);
        } else if g == unit {
            out.push(Sector::Vacuum);
        } else if g == psi {
            out.push(Sector::Fermion);
        } else {
            let rep = coset_rep.ok_or_else(shape_error)?;
            if g == rep {
                out.push(Sector::Vacuum);
            } else if fusion.admits(rep, psi, g) {
                out.push(Sector::Fermion);
            } else {
                return Err(shape_error());
            }
        }
    }
    Ok(out)
}

type FKey = [LabelId; 6];

/// F-symbols `(F^{abc}_d)_{ef}` keyed by admissible tuples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FSymbolSet {
    entries: HashMap<FKey, C64>,
}

/// Both fusion trees of `(F^{abc}_d)_{ef}` exist.
pub fn f_admissible(model: &AnyonModel, [a, b, c, d, e, f]: FKey) -> bool {
    let n = model.fusion();
    n.admits(a, b, e) && n.admits(e, c, d) && n.admits(b, c, f) && n.admits(a, f, d)
}

fn key_names(model: &AnyonModel, key: &[LabelId]) -> String {
    key.iter()
        .map(|&l| model.name(l))
        .collect::<Vec<_>>()
        .join(",")
}

impl FSymbolSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, key: FKey, value: C64) {
        self.entries.insert(key, value);
    }

    pub fn remove(&mut self, key: &FKey) -> Option<C64> {
        self.entries.remove(key)
    }

    pub fn entry(&self, key: &FKey) -> Option<C64> {
        self.entries.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FKey, &C64)> {
        self.entries.iter()
    }

    /// Symbol value; inadmissible tuples are 0, missing admissible ones an error.
    pub fn get(&self, model: &AnyonModel, key: FKey) -> Result<C64> {
        if !f_admissible(model, key) {
            return Ok(ZERO);
        }
        self.entries
            .get(&key)
            .copied()
            .ok_or_else(|| Error::MissingFSymbol(key_names(model, &key)))
    }

    /// Every admissible tuple of `model`.
    pub fn admissible_keys(model: &AnyonModel) -> Vec<FKey> {
        let n = model.fusion();
        let mut keys = Vec::new();
        for a in model.ids() {
            for b in model.ids() {
                for c in model.ids() {
                    for (e, _) in n.channels(a, b) {
                        for (d, _) in n.channels(e, c) {
                            for (f, _) in n.channels(b, c) {
                                if n.admits(a, f, d) {
                                    keys.push([a, b, c, d, e, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        keys
    }

    /// Full symbol set of a defect model with the given defect block and
    /// fermion sign `κ`.
    pub fn for_defect_model(model: &AnyonModel, block: &Mat2, kappa: f64) -> Result<Self> {
        let sector = sectors(model)?;
        let chi = |x: LabelId, y: LabelId| {
            if sector[x.0] == Sector::Fermion && sector[y.0] == Sector::Fermion {
                C64::new(kappa, 0.0)
            } else {
                ONE
            }
        };
        let mut set = FSymbolSet::new();
        for key in Self::admissible_keys(model) {
            let [a, b, c, d, e, f] = key;
            let s = [sector[a.0], sector[b.0], sector[c.0], sector[d.0]];
            let value = match s {
                [Sector::Twist, Sector::Twist, Sector::Twist, Sector::Twist] => {
                    block[(sector[e.0].block_index(), sector[f.0].block_index())]
                }
                [ga, Sector::Twist, gc, Sector::Twist]
                    if ga != Sector::Twist && gc != Sector::Twist =>
                {
                    chi(a, c)
                }
                [Sector::Twist, gb, Sector::Twist, gd]
                    if gb != Sector::Twist && gd != Sector::Twist =>
                {
                    chi(b, d)
                }
                _ => ONE,
            };
            set.insert(key, value);
        }
        Ok(set)
    }

    /// Applies the vertex gauge `u(a, b; c)`:
    /// `F' = u(a,b;e) u(e,c;d) / (u(b,c;f) u(a,f;d)) · F`.
    pub fn gauge_transform(&self, u: impl Fn(LabelId, LabelId, LabelId) -> C64) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(&key, &v)| {
                let [a, b, c, d, e, f] = key;
                (key, v * u(a, b, e) * u(e, c, d) / (u(b, c, f) * u(a, f, d)))
            })
            .collect();
        FSymbolSet { entries }
    }

    /// The 2×2 block `F^{χχχ}_χ` for defect `chi`, indexed over the sectors
    /// of the internal channels.
    pub fn defect_block(&self, model: &AnyonModel, chi: LabelId) -> Result<Mat2> {
        let sector = sectors(model)?;
        let channels: Vec<LabelId> = model.fusion().channels(chi, chi).map(|(c, _)| c).collect();
        let mut m = Mat2::zeros();
        for &e in &channels {
            for &f in &channels {
                let v = self.get(model, [chi, chi, chi, chi, e, f])?;
                m[(sector[e.0].block_index(), sector[f.0].block_index())] = v;
            }
        }
        Ok(m)
    }

    /// JSON object keyed by comma-joined label tuples with `[re, im]` values.
    pub fn to_json(&self, model: &AnyonModel) -> BTreeMap<String, [f64; 2]> {
        self.entries
            .iter()
            .map(|(k, v)| (key_names(model, k), linalg::pair(*v)))
            .collect()
    }

    pub fn from_json(model: &AnyonModel, map: &BTreeMap<String, [f64; 2]>) -> Result<Self> {
        let mut set = FSymbolSet::new();
        for (k, [re, im]) in map {
            let ids = parse_key(model, k, 6)?;
            set.insert(
                [ids[0], ids[1], ids[2], ids[3], ids[4], ids[5]],
                C64::new(*re, *im),
            );
        }
        Ok(set)
    }
}

fn parse_key(model: &AnyonModel, key: &str, len: usize) -> Result<Vec<LabelId>> {
    let ids = key
        .split(',')
        .map(|n| model.id(n.trim()))
        .collect::<Result<Vec<_>>>()?;
    if ids.len() != len {
        return Err(Error::Shape(format!(
            "key `{key}` has {} labels, expected {len}",
            ids.len()
        )));
    }
    Ok(ids)
}

/// One internal-label assignment of a pentagon with fixed externals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PentagonInstance {
    /// `(a, b, c, d)`: `a = 1⊗2`, `b = a⊗3`, `c = 3⊗4`, `d = 2⊗c`.
    pub internal: [LabelId; 4],
    pub residual: f64,
}

/// Pentagon instances for externals `(1, 2, 3, 4; 5)`:
///
/// `(F^{12c}_5)_{ad} (F^{a34}_5)_{bc} = Σ_e (F^{123}_b)_{ae} (F^{1e4}_5)_{bd} (F^{234}_d)_{ec}`.
pub fn pentagon_instances(
    model: &AnyonModel,
    f: &FSymbolSet,
    externals: [LabelId; 5],
) -> Result<Vec<PentagonInstance>> {
    let [x1, x2, x3, x4, x5] = externals;
    let n = model.fusion();
    let mut out = Vec::new();
    for (a, _) in n.channels(x1, x2) {
        for (b, _) in n.channels(a, x3) {
            if !n.admits(b, x4, x5) {
                continue;
            }
            for (c, _) in n.channels(x3, x4) {
                for (d, _) in n.channels(x2, c) {
                    if !n.admits(x1, d, x5) {
                        continue;
                    }
                    let lhs = f.get(model, [x1, x2, c, x5, a, d])?
                        * f.get(model, [a, x3, x4, x5, b, c])?;
                    let mut rhs = ZERO;
                    for e in model.ids() {
                        let first = f.get(model, [x1, x2, x3, b, a, e])?;
                        if first == ZERO {
                            continue;
                        }
                        rhs += first
                            * f.get(model, [x1, e, x4, x5, b, d])?
                            * f.get(model, [x2, x3, x4, d, e, c])?;
                    }
                    out.push(PentagonInstance {
                        internal: [a, b, c, d],
                        residual: (lhs - rhs).norm(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Largest pentagon residual over internal labels; 0 when nothing is admissible.
pub fn pentagon_residual(
    model: &AnyonModel,
    f: &FSymbolSet,
    externals: [LabelId; 5],
) -> Result<f64> {
    Ok(pentagon_instances(model, f, externals)?
        .iter()
        .map(|i| i.residual)
        .fold(0.0, f64::max))
}

/// Summary of a pentagon sweep over every external 5-tuple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PentagonSweep {
    pub externals_checked: usize,
    pub instances_checked: usize,
    pub max_residual: f64,
    pub worst: Option<[LabelId; 5]>,
}

pub fn pentagon_sweep(model: &AnyonModel, f: &FSymbolSet) -> Result<PentagonSweep> {
    let k = model.rank();
    let tuples: Vec<[LabelId; 5]> = (0..k.pow(5))
        .map(|mut i| {
            let mut t = [LabelId(0); 5];
            for slot in t.iter_mut().rev() {
                *slot = LabelId(i % k);
                i /= k;
            }
            t
        })
        .collect();
    let results = tuples
        .par_iter()
        .map(|&ext| pentagon_instances(model, f, ext).map(|inst| (ext, inst)))
        .collect::<Result<Vec<_>>>()?;
    let mut sweep = PentagonSweep {
        externals_checked: results.len(),
        instances_checked: 0,
        max_residual: 0.0,
        worst: None,
    };
    for (ext, inst) in results {
        sweep.instances_checked += inst.len();
        for i in inst {
            if i.residual > sweep.max_residual || sweep.worst.is_none() {
                sweep.max_residual = sweep.max_residual.max(i.residual);
                sweep.worst = Some(ext);
            }
        }
    }
    Ok(sweep)
}

/// R-symbols `R^{ab}_c` keyed by admissible `(a, b, c)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RSymbolSet {
    entries: HashMap<[LabelId; 3], C64>,
}

/// Defect braiding data: `R^{χχ}_1`, `R^{χχ}_f` and `R^{χf}_χ` (with `R^{χ1}_χ = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DefectR {
    pub vacuum: C64,
    pub fermion: C64,
    pub twist_fermion: C64,
}

impl DefectR {
    /// `diag(R^{χχ}_1, R^{χχ}_f)`.
    pub fn matrix(&self) -> Mat2 {
        linalg::diag2(self.vacuum, self.fermion)
    }

    /// Counterclockwise exchange.
    pub fn conj(&self) -> Self {
        DefectR {
            vacuum: self.vacuum.conj(),
            fermion: self.fermion.conj(),
            twist_fermion: self.twist_fermion.conj(),
        }
    }

    fn distance(&self, other: &DefectR) -> f64 {
        (self.vacuum - other.vacuum)
            .norm()
            .max((self.fermion - other.fermion).norm())
            .max((self.twist_fermion - other.twist_fermion).norm())
    }
}

impl RSymbolSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, key: [LabelId; 3], value: C64) {
        self.entries.insert(key, value);
    }

    pub fn entry(&self, key: &[LabelId; 3]) -> Option<C64> {
        self.entries.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[LabelId; 3], &C64)> {
        self.entries.iter()
    }

    pub fn get(&self, model: &AnyonModel, key: [LabelId; 3]) -> Result<C64> {
        let [a, b, c] = key;
        if !model.fusion().admits(a, b, c) {
            return Ok(ZERO);
        }
        self.entries
            .get(&key)
            .copied()
            .ok_or_else(|| Error::MissingRSymbol(key_names(model, &key)))
    }

    /// Clockwise R-symbols of the defect model: trivial braiding with the
    /// vacuum, the toric-code bicharacter `(-1)^{m(a)·e(b)}` on bulk pairs,
    /// and the defect data for each twist braided with itself or the fermion.
    pub fn for_defect_model(model: &AnyonModel, defect: &DefectR) -> Result<Self> {
        let sector = sectors(model)?;
        let fusion = model.fusion();
        let unit = model.unit();
        let mut set = RSymbolSet::new();
        for a in model.ids() {
            set.insert([unit, a, a], ONE);
            set.insert([a, unit, a], ONE);
        }

        // Bulk charges: m-charge is the fermion-like class, e-charge flips on
        // the off-stabilizer coset of the first twist.
        let first_twist = model.ids().find(|a| sector[a.0] == Sector::Twist);
        let coset = |g: LabelId| -> u8 {
            match first_twist {
                Some(t) => u8::from(!fusion.admits(g, t, t)),
                None => 0,
            }
        };
        let m_charge = |g: LabelId| u8::from(sector[g.0] == Sector::Fermion);
        let e_charge = |g: LabelId| m_charge(g) ^ coset(g);
        for a in model.ids().filter(|a| sector[a.0] != Sector::Twist) {
            for b in model.ids().filter(|b| sector[b.0] != Sector::Twist) {
                for (c, _) in fusion.channels(a, b) {
                    let sign = if m_charge(a) & e_charge(b) == 1 {
                        -ONE
                    } else {
                        ONE
                    };
                    set.insert([a, b, c], sign);
                }
            }
        }

        for x in model.ids().filter(|a| sector[a.0] == Sector::Twist) {
            for (c, _) in fusion.channels(x, x) {
                let v = match sector[c.0] {
                    Sector::Vacuum => defect.vacuum,
                    _ => defect.fermion,
                };
                set.insert([x, x, c], v);
                if sector[c.0] == Sector::Fermion {
                    set.insert([x, c, x], defect.twist_fermion);
                    set.insert([c, x, x], defect.twist_fermion);
                }
            }
        }
        Ok(set)
    }

    /// Counterclockwise symbols: complex conjugates.
    pub fn inverse(&self) -> Self {
        RSymbolSet {
            entries: self.entries.iter().map(|(&k, v)| (k, v.conj())).collect(),
        }
    }

    pub fn to_json(&self, model: &AnyonModel) -> BTreeMap<String, [f64; 2]> {
        self.entries
            .iter()
            .map(|(k, v)| (key_names(model, k), linalg::pair(*v)))
            .collect()
    }

    pub fn from_json(model: &AnyonModel, map: &BTreeMap<String, [f64; 2]>) -> Result<Self> {
        let mut set = RSymbolSet::new();
        for (k, [re, im]) in map {
            let ids = parse_key(model, k, 3)?;
            set.insert([ids[0], ids[1], ids[2]], C64::new(*re, *im));
        }
        Ok(set)
    }
}

/// One `(a, c)` instance of a hexagon with fixed externals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HexagonInstance {
    /// `a = 1⊗2` and `c = 1⊗3`.
    pub a: LabelId,
    pub c: LabelId,
    pub residual: f64,
}

/// Hexagon instances for externals `(1, 2, 3; 4)`:
///
/// `Σ_b (F^{231}_4)_{bc} R^{1b}_4 (F^{123}_4)_{ab} = R^{13}_c (F^{213}_4)_{ac} R^{12}_a`.
pub fn hexagon_instances(
    model: &AnyonModel,
    f: &FSymbolSet,
    r: &RSymbolSet,
    externals: [LabelId; 4],
) -> Result<Vec<HexagonInstance>> {
    let [x1, x2, x3, x4] = externals;
    let n = model.fusion();
    let mut out = Vec::new();
    for (a, _) in n.channels(x1, x2) {
        if !n.admits(a, x3, x4) {
            continue;
        }
        for (c, _) in n.channels(x1, x3) {
            if !n.admits(x2, c, x4) {
                continue;
            }
            let mut lhs = ZERO;
            for (b, _) in n.channels(x2, x3) {
                if !n.admits(x1, b, x4) {
                    continue;
                }
                lhs += f.get(model, [x2, x3, x1, x4, b, c])?
                    * r.get(model, [x1, b, x4])?
                    * f.get(model, [x1, x2, x3, x4, a, b])?;
            }
            let rhs = r.get(model, [x1, x3, c])?
                * f.get(model, [x2, x1, x3, x4, a, c])?
                * r.get(model, [x1, x2, a])?;
            out.push(HexagonInstance {
                a,
                c,
                residual: (lhs - rhs).norm(),
            });
        }
    }
    Ok(out)
}

pub fn hexagon_residual(
    model: &AnyonModel,
    f: &FSymbolSet,
    r: &RSymbolSet,
    externals: [LabelId; 4],
) -> Result<f64> {
    Ok(hexagon_instances(model, f, r, externals)?
        .iter()
        .map(|i| i.residual)
        .fold(0.0, f64::max))
}

/// Summary of a hexagon sweep over every 4-tuple drawn from a label set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HexagonSweep {
    pub externals_checked: usize,
    pub instances_checked: usize,
    pub max_residual: f64,
}

pub fn hexagon_sweep(
    model: &AnyonModel,
    f: &FSymbolSet,
    r: &RSymbolSet,
    labels: &[LabelId],
) -> Result<HexagonSweep> {
    let mut sweep = HexagonSweep {
        externals_checked: 0,
        instances_checked: 0,
        max_residual: 0.0,
    };
    for &a in labels {
        for &b in labels {
            for &c in labels {
                for &d in labels {
                    let inst = hexagon_instances(model, f, r, [a, b, c, d])?;
                    sweep.externals_checked += 1;
                    sweep.instances_checked += inst.len();
                    for i in inst {
                        sweep.max_residual = sweep.max_residual.max(i.residual);
                    }
                }
            }
        }
    }
    Ok(sweep)
}

/// Label sets on which [`RSymbolSet::for_defect_model`] defines every
/// needed exchange: the bulk anyons, and `{1, ψ, χ}` for each defect `χ`.
pub fn braided_subsets(model: &AnyonModel) -> Result<Vec<Vec<LabelId>>> {
    let sector = sectors(model)?;
    let mut out = vec![model
        .ids()
        .filter(|a| sector[a.0] != Sector::Twist)
        .collect::<Vec<_>>()];
    for x in model.ids().filter(|a| sector[a.0] == Sector::Twist) {
        let mut set: Vec<LabelId> = model.fusion().channels(x, x).map(|(c, _)| c).collect();
        set.push(x);
        out.push(set);
    }
    Ok(out)
}

/// Solved defect F-matrix together with the auxiliary quantities of the
/// reduced pentagon system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectF {
    /// `F^{χχχ}_χ`, `[left][right]` over `(1, f)`.
    #[serde(serialize_with = "serialize_mat2")]
    pub matrix: Mat2,
    /// Sign of `(F^{fχf}_χ)_{χχ}` forced by the pentagon.
    pub kappa: f64,
    /// The eliminated product `A = (F^{ffχ}_χ)_{1χ} (F^{fχχ}_1)_{χf}`.
    #[serde(serialize_with = "serialize_c64")]
    pub a_factor: C64,
    /// Sign/phase branches examined before gauge fixing.
    pub branches_examined: usize,
    /// Branches satisfying the reduced system before gauge fixing.
    pub branches_consistent: usize,
}

fn serialize_mat2<S: serde::Serializer>(m: &Mat2, s: S) -> std::result::Result<S::Ok, S::Error> {
    linalg::to_grid(m).serialize(s)
}

fn serialize_c64<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    linalg::pair(*z).serialize(s)
}

/// Residuals of the reduced pentagon system for block `m`, factor `a` and sign `κ`:
///
/// ```text
/// 1 = F11² + Ff1·F1f          (vacuum/vacuum)
/// Fff = −F11                  (vacuum/fermion)
/// 1 = F1f·Ff1 + Fff²          (fermion/fermion)
/// F11 = A·Ff1                 (fermion external, b = c = 1)
/// κ·F1f = A·Fff               (fermion external, b = 1, c = f)
/// ```
pub fn pentagon_reductions(m: &Mat2, a: C64, kappa: f64) -> [f64; 5] {
    let (p, q, r, s) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let k = C64::new(kappa, 0.0);
    [
        (p * p + r * q - ONE).norm(),
        (s + p).norm(),
        (q * r + s * s - ONE).norm(),
        (p - a * r).norm(),
        (k * q - a * s).norm(),
    ]
}

/// Solves the reduced pentagon system for the defect F-block.
///
/// Branches: `κ ∈ {+1, −1}` and the sign of `F11`. Eliminating `A` gives
/// `F1f·Ff1 = −κ·F11²`, so `F11² (1 − κ) = 1`, which rules out `κ = +1`.
/// Unitarity fixes `|F1f| = |Ff1|`; the gauge makes `F11` and `F1f` real
/// and positive.
pub fn solve_defect_f() -> DefectF {
    let mut consistent = Vec::new();
    let mut examined = 0;
    for kappa in [1.0, -1.0] {
        for sign in [1.0, -1.0] {
            examined += 1;
            let denom: f64 = 1.0 - kappa;
            if denom.abs() < TOL {
                continue;
            }
            let p = sign * (1.0 / denom).sqrt();
            let s = -p;
            let off = 1.0 - p * p;
            if off <= 0.0 {
                continue;
            }
            let q = off.sqrt();
            let r = off / q;
            let m = Mat2::new(
                C64::new(p, 0.0),
                C64::new(q, 0.0),
                C64::new(r, 0.0),
                C64::new(s, 0.0),
            );
            let a = C64::new(p / r, 0.0);
            let worst = pentagon_reductions(&m, a, kappa)
                .into_iter()
                .fold(0.0, f64::max);
            if worst < TOL && linalg::is_unitary(&m, TOL) {
                consistent.push((m, a, kappa));
            }
        }
    }
    let branches_consistent = consistent.len();
    let (matrix, a_factor, kappa) = consistent
        .into_iter()
        .find(|(m, _, _)| m[(0, 0)].re > 0.0)
        .expect("reduced pentagon system has a gauge-fixed solution");
    DefectF {
        matrix,
        kappa,
        a_factor,
        branches_examined: examined,
        branches_consistent,
    }
}

/// Residuals of the four hexagon instances with all externals χ,
/// in the order `(a,c) = (1,1), (f,f), (1,f), (f,1)`.
pub fn hexagon_reductions(m: &Mat2, r: &DefectR) -> [f64; 4] {
    let x = [ONE, r.twist_fermion];
    let rr = [r.vacuum, r.fermion];
    let inst = |a: usize, c: usize| {
        let lhs: C64 = (0..2).map(|b| m[(b, c)] * x[b] * m[(a, b)]).sum();
        (lhs - rr[c] * m[(a, c)] * rr[a]).norm()
    };
    [inst(0, 0), inst(1, 1), inst(0, 1), inst(1, 0)]
}

/// All defect braiding solutions for a given F-block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RSolution {
    pub canonical: DefectR,
    pub solutions: Vec<DefectR>,
}

/// `e^{−iπ/8}`, the vacuum-channel exchange phase chosen as canonical.
pub fn canonical_vacuum_phase() -> C64 {
    cis(-FRAC_PI_8)
}

/// Solves the reduced hexagon system with `R^{χ1}_χ = 1`.
///
/// Writing `X = R^{χf}_χ`, the `(1,1)`, `(f,f)` and `(1,f)` instances give
/// `R1²`, `Rf²` and `R1·Rf` as affine functions of `X`; equating
/// `(R1·Rf)² = R1²·Rf²` leaves a quadratic in `X`. Unit-modulus roots are
/// expanded over the two square-root signs and kept when every instance holds.
pub fn solve_defect_r(f: &Mat2) -> Result<RSolution> {
    if !linalg::is_unitary(f, 1e-10) {
        return Err(Error::Precondition("F-block is not unitary".into()));
    }
    if f.iter().any(|z| z.norm() < 1e-10) {
        return Err(Error::Precondition(
            "F-block must have four nonzero entries".into(),
        ));
    }
    let (p, q, r, s) = (f[(0, 0)], f[(0, 1)], f[(1, 0)], f[(1, 1)]);
    let qr = q * r;
    // (p + sX)² p s = (p² + qr X)(qr + s² X)
    let c2 = p * s * s * s - qr * s * s;
    let c1 = p * p * s * s - qr * qr;
    let c0 = p * p * p * s - p * p * qr;
    let roots = quadratic_roots(c2, c1, c0);

    let mut solutions: Vec<DefectR> = Vec::new();
    for x in roots {
        if (x.norm() - 1.0).abs() > 1e-9 {
            continue;
        }
        let x = x / x.norm();
        let r1_sq = (p * p + qr * x) / p;
        let product = p + s * x;
        for sign in [1.0, -1.0] {
            let r1 = r1_sq.sqrt() * sign;
            if r1.norm() < 1e-12 {
                continue;
            }
            let candidate = DefectR {
                vacuum: r1,
                fermion: product / r1,
                twist_fermion: x,
            };
            let unit = [candidate.vacuum, candidate.fermion, candidate.twist_fermion]
                .iter()
                .all(|z| (z.norm() - 1.0).abs() < TOL);
            let worst = hexagon_reductions(f, &candidate)
                .into_iter()
                .fold(0.0, f64::max);
            if unit && worst < TOL && solutions.iter().all(|s| s.distance(&candidate) > 1e-9) {
                solutions.push(candidate);
            }
        }
    }
    solutions.sort_by(|a, b| a.vacuum.arg().total_cmp(&b.vacuum.arg()));
    let target = canonical_vacuum_phase();
    let canonical = solutions
        .iter()
        .copied()
        .find(|s| (s.vacuum - target).norm() < 1e-9)
        .ok_or_else(|| {
            Error::Precondition("no hexagon solution with R^{χχ}_1 = e^{-iπ/8}".into())
        })?;
    Ok(RSolution {
        canonical,
        solutions,
    })
}

fn quadratic_roots(a: C64, b: C64, c: C64) -> Vec<C64> {
    if a.norm() < 1e-14 {
        if b.norm() < 1e-14 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = (b * b - a * c * 4.0).sqrt();
    // Pick the numerically stable pairing.
    let qv = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) * 0.5
    } else {
        -(b - disc) * 0.5
    };
    if qv.norm() < 1e-14 {
        return vec![ZERO, ZERO];
    }
    vec![qv / a, c / qv]
}

/// The Hadamard-shaped block the solver returns, for reference in tests.
pub fn hadamard_block() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    Mat2::new(h, h, h, -h)
}
