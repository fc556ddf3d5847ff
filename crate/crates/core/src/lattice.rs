//! Pauli operators in symplectic form and toric-code stabilizers on small
//! patches, used to check where the five-site defect operator `XYZZZ`
//! commutes with every stabilizer.
//!
//! Qubits live on edges. Horizontal edges are numbered first (row by row),
//! then vertical edges (column by column); edges removed by a rough side are
//! skipped. A rough side drops its vertices and the edges lying along it,
//! except edges touching a corner where a rough side meets a smooth one.

use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            _ => Err(Error::Parameter(format!("unknown Pauli letter `{c}`"))),
        }
    }
}

/// `i^phase · Π_j X_j^{x_j} Z_j^{z_j}`; a `Y` site contributes `i` to the phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec<u64>,
    z: BitVec<u64>,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(sites: usize) -> Self {
        PauliOperator {
            x: bitvec![u64, Lsb0; 0; sites],
            z: bitvec![u64, Lsb0; 0; sites],
            phase: 0,
        }
    }

    /// Tensor product of letters on the given sites, `Y` taken as the
    /// Hermitian `iXZ`.
    pub fn from_letters(sites: usize, letters: &[(usize, Letter)]) -> Result<Self> {
        let mut op = Self::identity(sites);
        for &(site, letter) in letters {
            if site >= sites {
                return Err(Error::SiteRange { site, sites });
            }
            if op.letter(site) != Letter::I {
                return Err(Error::Parameter(format!("site {site} listed twice")));
            }
            let (x, z) = letter.bits();
            op.x.set(site, x);
            op.z.set(site, z);
            if letter == Letter::Y {
                op.phase = (op.phase + 1) % 4;
            }
        }
        Ok(op)
    }

    /// Parses `X2 Y3 Z4` with an optional leading `+`, `-`, `i`, `-i` token.
    pub fn parse(sites: usize, text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace().peekable();
        let extra = match tokens.peek().copied() {
            Some("+") | Some("+1") => Some(0),
            Some("i") | Some("+i") => Some(1),
            Some("-") | Some("-1") => Some(2),
            Some("-i") => Some(3),
            _ => None,
        };
        if extra.is_some() {
            tokens.next();
        }
        let mut letters = Vec::new();
        for tok in tokens {
            if tok == "I" {
                continue;
            }
            let bad = || Error::Parameter(format!("malformed Pauli token `{tok}`"));
            let mut chars = tok.chars();
            let letter = Letter::try_from(chars.next().ok_or_else(bad)?)?;
            let site: usize = chars.as_str().parse().map_err(|_| bad())?;
            if letter != Letter::I {
                letters.push((site, letter));
            }
        }
        let mut op = Self::from_letters(sites, &letters)?;
        op.phase = (op.phase + extra.unwrap_or(0)) % 4;
        Ok(op)
    }

    pub fn sites(&self) -> usize {
        self.x.len()
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bits(&self) -> &BitSlice<u64> {
        &self.x
    }

    pub fn z_bits(&self) -> &BitSlice<u64> {
        &self.z
    }

    pub fn letter(&self, site: usize) -> Letter {
        Letter::from_bits(self.x[site], self.z[site])
    }

    pub fn weight(&self) -> usize {
        (self.x.clone() | &self.z).count_ones()
    }

    /// Non-identity sites in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (self.x.clone() | &self.z).iter_ones().collect()
    }

    fn check_shape(&self, other: &PauliOperator) -> Result<()> {
        if self.sites() != other.sites() {
            return Err(Error::Shape(format!(
                "operators act on {} and {} sites",
                self.sites(),
                other.sites()
            )));
        }
        Ok(())
    }

    fn overlap(a: &BitVec<u64>, b: &BitVec<u64>) -> u32 {
        a.as_raw_slice()
            .iter()
            .zip(b.as_raw_slice())
            .map(|(u, v)| (u & v).count_ones())
            .sum()
    }

    /// Symplectic form `x_P·z_Q + z_P·x_Q` over GF(2).
    pub fn symplectic(&self, other: &PauliOperator) -> Result<u8> {
        self.check_shape(other)?;
        let s = Self::overlap(&self.x, &other.z) + Self::overlap(&self.z, &other.x);
        Ok((s % 2) as u8)
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        Ok(self.symplectic(other)? == 0)
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_shape(other)?;
        // Z^b X^c = (-1)^{b·c} X^c Z^b
        let swaps = Self::overlap(&self.z, &other.x);
        Ok(PauliOperator {
            x: self.x.clone() ^ &other.x,
            z: self.z.clone() ^ &other.z,
            phase: ((self.phase as u32 + other.phase as u32 + 2 * swaps) % 4) as u8,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.x.not_any() && self.z.not_any()
    }

    /// Overall phase once every `Y` is written as the Hermitian letter.
    fn display_phase(&self) -> u8 {
        let ys = Self::overlap(&self.x, &self.z);
        ((self.phase as u32 + 4 - ys % 4) % 4) as u8
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.display_phase() {
            1 => parts.push("i".into()),
            2 => parts.push("-".into()),
            3 => parts.push("-i".into()),
            _ => {}
        }
        let support = self.support();
        if support.is_empty() {
            parts.push("I".into());
        }
        for site in support {
            parts.push(format!("{:?}{site}", self.letter(site)));
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Smooth,
    Rough,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s" | "smooth" => Ok(Boundary::Smooth),
            "r" | "rough" => Ok(Boundary::Rough),
            other => Err(Error::Parameter(format!("unknown boundary `{other}`"))),
        }
    }
}

/// Side tags of a rectangular patch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Boundaries {
    pub left: Boundary,
    pub right: Boundary,
    pub bottom: Boundary,
    pub top: Boundary,
}

impl Boundaries {
    pub fn uniform(b: Boundary) -> Self {
        Boundaries {
            left: b,
            right: b,
            bottom: b,
            top: b,
        }
    }
}

/// `left,right,bottom,top`, e.g. `rough,smooth,smooth,smooth` or `R,S,S,S`.
impl FromStr for Boundaries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sides = s
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<Boundary>>>()?;
        let [left, right, bottom, top] = sides[..] else {
            return Err(Error::Parameter(format!(
                "expected four boundary tags (left,right,bottom,top), got `{s}`"
            )));
        };
        Ok(Boundaries {
            left,
            right,
            bottom,
            top,
        })
    }
}

pub type Vertex = (usize, usize);

/// Edge between two lattice vertices, lower endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Edge(pub Vertex, pub Vertex);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilizerKind {
    /// `X` on the edges meeting a vertex.
    Vertex,
    /// `Z` on the edges bounding a face.
    Plaquette,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    pub kind: StabilizerKind,
    /// Vertex position, or lower-left corner of the face.
    pub anchor: Vertex,
    pub operator: PauliOperator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerLattice {
    pub width: usize,
    pub height: usize,
    /// `None` for a torus.
    pub boundaries: Option<Boundaries>,
    pub edges: Vec<Edge>,
    pub stabilizers: Vec<Stabilizer>,
}

pub fn build_patch(
    width: usize,
    height: usize,
    boundaries: Boundaries,
) -> Result<StabilizerLattice> {
    if width < 2 || height < 2 {
        return Err(Error::Parameter(format!(
            "patch must be at least 2x2, got {width}x{height}"
        )));
    }
    let sides_of = |(x, y): Vertex| {
        let mut s = Vec::with_capacity(2);
        if x == 0 {
            s.push(boundaries.left);
        }
        if x == width {
            s.push(boundaries.right);
        }
        if y == 0 {
            s.push(boundaries.bottom);
        }
        if y == height {
            s.push(boundaries.top);
        }
        s
    };
    let rough_vertex = |v: Vertex| sides_of(v).contains(&Boundary::Rough);
    let junction = |v: Vertex| {
        let s = sides_of(v);
        s.len() == 2 && s[0] != s[1]
    };
    let along_rough_side = |Edge(a, b): Edge| {
        let rough = |side: Boundary| side == Boundary::Rough;
        (rough(boundaries.left) && a.0 == 0 && b.0 == 0)
            || (rough(boundaries.right) && a.0 == width && b.0 == width)
            || (rough(boundaries.bottom) && a.1 == 0 && b.1 == 0)
            || (rough(boundaries.top) && a.1 == height && b.1 == height)
    };

    let mut all = Vec::new();
    for y in 0..=height {
        for x in 0..width {
            all.push(Edge((x, y), (x + 1, y)));
        }
    }
    for x in 0..=width {
        for y in 0..height {
            all.push(Edge((x, y), (x, y + 1)));
        }
    }
    let edges: Vec<Edge> = all
        .into_iter()
        .filter(|&e| !along_rough_side(e) || junction(e.0) || junction(e.1))
        .collect();
    let sites = edges.len();
    let index = |e: Edge| edges.iter().position(|&f| f == e);

    let mut stabilizers = Vec::new();
    for x in 0..=width {
        for y in 0..=height {
            if rough_vertex((x, y)) {
                continue;
            }
            let star: Vec<(usize, Letter)> = edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.0 == (x, y) || e.1 == (x, y))
                .map(|(i, _)| (i, Letter::X))
                .collect();
            if !star.is_empty() {
                stabilizers.push(Stabilizer {
                    kind: StabilizerKind::Vertex,
                    anchor: (x, y),
                    operator: PauliOperator::from_letters(sites, &star)?,
                });
            }
        }
    }
    for y in 0..height {
        for x in 0..width {
            let face: Vec<(usize, Letter)> = face_edges((x, y))
                .into_iter()
                .filter_map(index)
                .map(|i| (i, Letter::Z))
                .collect();
            stabilizers.push(Stabilizer {
                kind: StabilizerKind::Plaquette,
                anchor: (x, y),
                operator: PauliOperator::from_letters(sites, &face)?,
            });
        }
    }
    Ok(StabilizerLattice {
        width,
        height,
        boundaries: Some(boundaries),
        edges,
        stabilizers,
    })
}

fn face_edges((x, y): Vertex) -> [Edge; 4] {
    [
        Edge((x, y), (x + 1, y)),
        Edge((x, y + 1), (x + 1, y + 1)),
        Edge((x, y), (x, y + 1)),
        Edge((x + 1, y), (x + 1, y + 1)),
    ]
}

/// Periodic `width × height` lattice. Edges wrap, so an edge's second
/// endpoint may have a coordinate of 0 on the seam.
pub fn build_torus(width: usize, height: usize) -> Result<StabilizerLattice> {
    if width < 2 || height < 2 {
        return Err(Error::Parameter(format!(
            "torus must be at least 2x2, got {width}x{height}"
        )));
    }
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            edges.push(Edge((x, y), ((x + 1) % width, y)));
        }
    }
    for x in 0..width {
        for y in 0..height {
            edges.push(Edge((x, y), (x, (y + 1) % height)));
        }
    }
    let sites = edges.len();
    let h = |x: usize, y: usize| y * width + x;
    let v = |x: usize, y: usize| width * height + x * height + y;
    let mut stabilizers = Vec::new();
    for x in 0..width {
        for y in 0..height {
            let star = [
                h(x, y),
                h((x + width - 1) % width, y),
                v(x, y),
                v(x, (y + height - 1) % height),
            ];
            stabilizers.push(Stabilizer {
                kind: StabilizerKind::Vertex,
                anchor: (x, y),
                operator: PauliOperator::from_letters(sites, &star.map(|i| (i, Letter::X)))?,
            });
        }
    }
    for y in 0..height {
        for x in 0..width {
            let face = [
                h(x, y),
                h(x, (y + 1) % height),
                v(x, y),
                v((x + 1) % width, y),
            ];
            stabilizers.push(Stabilizer {
                kind: StabilizerKind::Plaquette,
                anchor: (x, y),
                operator: PauliOperator::from_letters(sites, &face.map(|i| (i, Letter::Z)))?,
            });
        }
    }
    Ok(StabilizerLattice {
        width,
        height,
        boundaries: None,
        edges,
        stabilizers,
    })
}

impl StabilizerLattice {
    pub fn sites(&self) -> usize {
        self.edges.len()
    }

    /// Site index of the edge joining `a` and `b`, in either order.
    pub fn site(&self, a: Vertex, b: Vertex) -> Option<usize> {
        self.edges
            .iter()
            .position(|&Edge(p, q)| (p, q) == (a, b) || (p, q) == (b, a))
    }

    pub fn count(&self, kind: StabilizerKind) -> usize {
        self.stabilizers.iter().filter(|s| s.kind == kind).count()
    }

    /// Index pairs of stabilizers that fail to commute.
    pub fn noncommuting_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.stabilizers.iter().enumerate() {
            for (j, b) in self.stabilizers.iter().enumerate().skip(i + 1) {
                if !a.operator.commutes(&b.operator).expect("same lattice") {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// One stabilizer per line: `vertex (x,y): X0 X3 X5`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (i, e) in self.edges.iter().enumerate() {
            s += &format!(
                "site {i}: ({},{})-({},{})\n",
                e.0 .0, e.0 .1, e.1 .0, e.1 .1
            );
        }
        for st in &self.stabilizers {
            let kind = match st.kind {
                StabilizerKind::Vertex => "vertex",
                StabilizerKind::Plaquette => "plaquette",
            };
            s += &format!(
                "{kind} ({},{}): {}\n",
                st.anchor.0, st.anchor.1, st.operator
            );
        }
        s
    }
}

/// Stabilizer that anticommutes with the defect operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectViolation {
    pub stabilizer: usize,
    pub kind: StabilizerKind,
    pub anchor: Vertex,
    pub operator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub support: [usize; 5],
    pub operator: String,
    pub violations: Vec<DefectViolation>,
}

impl DefectReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `X Y Z Z Z` on the support, in order.
pub fn defect_operator(sites: usize, support: [usize; 5]) -> Result<PauliOperator> {
    for &s in &support {
        if s >= sites {
            return Err(Error::SiteRange { site: s, sites });
        }
    }
    let mut sorted = support;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parameter(format!(
            "support {support:?} repeats a site"
        )));
    }
    let letters = [Letter::X, Letter::Y, Letter::Z, Letter::Z, Letter::Z];
    let pairs: Vec<_> = support.into_iter().zip(letters).collect();
    PauliOperator::from_letters(sites, &pairs)
}

pub fn verify_defect(lattice: &StabilizerLattice, support: [usize; 5]) -> Result<DefectReport> {
    let q = defect_operator(lattice.sites(), support)?;
    let mut violations = Vec::new();
    for (i, s) in lattice.stabilizers.iter().enumerate() {
        if !q.commutes(&s.operator)? {
            violations.push(DefectViolation {
                stabilizer: i,
                kind: s.kind,
                anchor: s.anchor,
                operator: s.operator.to_string(),
            });
        }
    }
    Ok(DefectReport {
        support,
        operator: q.to_string(),
        violations,
    })
}

/// Boundaries of the pinned junction fixture: rough on the left, smooth elsewhere.
pub fn junction_fixture_boundaries() -> Boundaries {
    Boundaries {
        left: Boundary::Rough,
        ..Boundaries::uniform(Boundary::Smooth)
    }
}

/// Support of a valid `XYZZZ` placement on the 3×3 junction fixture,
/// where the rough left side meets the smooth bottom side.
pub fn junction_fixture_support(lattice: &StabilizerLattice) -> Result<[usize; 5]> {
    let edges = [
        ((0, 0), (1, 0)),
        ((0, 0), (0, 1)),
        ((0, 1), (1, 1)),
        ((0, 2), (1, 2)),
        ((1, 1), (1, 2)),
    ];
    let mut out = [0; 5];
    for (slot, (a, b)) in out.iter_mut().zip(edges) {
        *slot = lattice
            .site(a, b)
            .ok_or_else(|| Error::Parameter(format!("lattice has no edge {a:?}-{b:?}")))?;
    }
    Ok(out)
}
