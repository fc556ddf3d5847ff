//! Matrix oracles for Pauli strings, built from the 2×2 letter matrices
//! without using the symplectic representation.

#![allow(dead_code)]

use anyon_forge::lattice::{Letter, PauliOperator};

pub const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

/// Gaussian integer `re + i·im`.
pub type Gi = (i64, i64);

fn gmul(a: Gi, b: Gi) -> Gi {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gadd(a: Gi, b: Gi) -> Gi {
    (a.0 + b.0, a.1 + b.1)
}

fn letter_matrix(l: Letter) -> [[Gi; 2]; 2] {
    match l {
        Letter::I => [[(1, 0), (0, 0)], [(0, 0), (1, 0)]],
        Letter::X => [[(0, 0), (1, 0)], [(1, 0), (0, 0)]],
        Letter::Y => [[(0, 0), (0, -1)], [(0, 1), (0, 0)]],
        Letter::Z => [[(1, 0), (0, 0)], [(0, 0), (-1, 0)]],
    }
}

/// Letters of operator number `k` on `n` sites, base-4 digits, site 0 first.
pub fn letters_of(k: usize, n: usize) -> Vec<Letter> {
    (0..n).map(|s| LETTERS[(k >> (2 * s)) & 3]).collect()
}

pub fn pauli(letters: &[Letter]) -> PauliOperator {
    let pairs: Vec<_> = letters.iter().copied().enumerate().collect();
    PauliOperator::from_letters(letters.len(), &pairs).unwrap()
}

pub type Dense = Vec<Vec<Gi>>;

/// Kronecker product of the letter matrices, site 0 on the high bit.
pub fn dense(letters: &[Letter]) -> Dense {
    let mut m: Dense = vec![vec![(1, 0)]];
    for &l in letters {
        let f = letter_matrix(l);
        let d = m.len();
        let mut out = vec![vec![(0, 0); 2 * d]; 2 * d];
        for (r, row) in m.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        out[2 * r + i][2 * c + j] = gmul(v, f[i][j]);
                    }
                }
            }
        }
        m = out;
    }
    m
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| (0..d).fold((0, 0), |acc, k| gadd(acc, gmul(a[r][k], b[k][c]))))
                .collect()
        })
        .collect()
}

pub fn scale(a: &Dense, phase: u8) -> Dense {
    let w = [(1, 0), (0, 1), (-1, 0), (0, -1)][phase as usize % 4];
    a.iter()
        .map(|row| row.iter().map(|&v| gmul(v, w)).collect())
        .collect()
}

/// Column action of a Pauli string: basis state `j` maps to
/// `i^phase[j] |row[j]⟩`. Built site by site from the letter matrices.
pub struct Monomial {
    pub row: Vec<u32>,
    pub phase: Vec<u8>,
}

pub fn monomial(letters: &[Letter]) -> Monomial {
    let n = letters.len();
    let dim = 1usize << n;
    let mut row = vec![0u32; dim];
    let mut phase = vec![0u8; dim];
    for j in 0..dim {
        let (mut r, mut p) = (0u32, 0u8);
        for (s, &l) in letters.iter().enumerate() {
            let bit = (j >> (n - 1 - s)) & 1;
            let m = letter_matrix(l);
            let out = if m[0][bit] != (0, 0) { 0 } else { 1 };
            let w = match m[out][bit] {
                (1, 0) => 0,
                (0, 1) => 1,
                (-1, 0) => 2,
                (0, -1) => 3,
                other => unreachable!("{other:?}"),
            };
            r |= (out as u32) << (n - 1 - s);
            p = (p + w) % 4;
        }
        row[j] = r;
        phase[j] = p;
    }
    Monomial { row, phase }
}

/// `PQ == QP` checked column by column.
pub fn monomials_commute(p: &Monomial, q: &Monomial) -> bool {
    (0..p.row.len()).all(|j| {
        let (a, pa) = (
            p.row[q.row[j] as usize],
            q.phase[j] + p.phase[q.row[j] as usize],
        );
        let (b, pb) = (
            q.row[p.row[j] as usize],
            p.phase[j] + q.phase[p.row[j] as usize],
        );
        a == b && pa % 4 == pb % 4
    })
}
