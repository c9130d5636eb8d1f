//! Three-letter Pauli strings and the orthogonal Pauli basis of 8x8 operators.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{invalid, Error};
use crate::matrix::{Matrix8, DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[one, o], [o, one]],
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    fn from_letter(ch: char) -> Option<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// `p[0] (x) p[1] (x) p[2]`, qubit 1 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub [Pauli; 3]);

impl PauliString {
    pub const IDENTITY: PauliString = PauliString([Pauli::I, Pauli::I, Pauli::I]);

    pub const fn new(p1: Pauli, p2: Pauli, p3: Pauli) -> Self {
        Self([p1, p2, p3])
    }

    /// A single Pauli letter on `qubit` (1-based), identity elsewhere.
    pub fn single(qubit: usize, p: Pauli) -> Self {
        let mut s = [Pauli::I; 3];
        s[qubit - 1] = p;
        Self(s)
    }

    /// All 64 strings in index order.
    pub fn all() -> impl Iterator<Item = PauliString> {
        (0..64).map(Self::from_index)
    }

    /// `16*p1 + 4*p2 + p3` with `I, X, Y, Z = 0..3`.
    pub fn index(self) -> usize {
        16 * self.0[0].index() + 4 * self.0[1].index() + self.0[2].index()
    }

    pub fn from_index(idx: usize) -> Self {
        assert!(idx < 64, "Pauli string index out of range");
        let p = |k: usize| Pauli::ALL[k & 3];
        Self([p(idx >> 4), p(idx >> 2), p(idx)])
    }

    pub fn weight(self) -> usize {
        self.0.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Kronecker product of the three letters.
    pub fn matrix(self) -> Matrix8 {
        let [a, b, c] = self.0.map(Pauli::matrix);
        Matrix8::from_fn(|r, col| {
            let (r1, r2, r3) = (r >> 2 & 1, r >> 1 & 1, r & 1);
            let (c1, c2, c3) = (col >> 2 & 1, col >> 1 & 1, col & 1);
            a[r1][c1] * b[r2][c2] * c[r3][c3]
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let letters: Vec<Pauli> = s
            .chars()
            .map(Pauli::from_letter)
            .collect::<Option<_>>()
            .ok_or_else(|| invalid("pauli", format!("unknown letter in {s:?}")))?;
        let arr: [Pauli; 3] = letters
            .try_into()
            .map_err(|_| invalid("pauli", format!("{s:?} is not three letters long")))?;
        Ok(Self(arr))
    }
}

/// Matrix of a Pauli string.
pub fn pauli_matrix(p: PauliString) -> Matrix8 {
    p.matrix()
}

/// Coefficients `c_P = Tr(P M) / 8` of a matrix in the Pauli basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliDecomposition {
    coeffs: [Complex64; 64],
}

impl PauliDecomposition {
    pub fn get(&self, p: PauliString) -> Complex64 {
        self.coeffs[p.index()]
    }

    /// Real part of the coefficient; exact for Hermitian inputs.
    pub fn real(&self, p: PauliString) -> f64 {
        self.get(p).re
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (PauliString::from_index(i), c))
    }

    pub fn reconstruct(&self) -> Matrix8 {
        self.iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(p, c)| p.matrix().scale(c))
            .sum()
    }
}

/// Decompose `m` over the 64 Pauli strings.
pub fn pauli_decompose(m: &Matrix8) -> PauliDecomposition {
    let coeffs = std::array::from_fn(|idx| pauli_coefficient(m, PauliString::from_index(idx)));
    PauliDecomposition { coeffs }
}

/// `Tr(P M) / 8` for a single string, computed from the sparse structure of `P`.
pub fn pauli_coefficient(m: &Matrix8, p: PauliString) -> Complex64 {
    let pm = p.matrix();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..DIM {
        for c in 0..DIM {
            let v = pm[(r, c)];
            if v.re != 0.0 || v.im != 0.0 {
                acc += v * m[(c, r)];
            }
        }
    }
    acc / DIM as f64
}

/// `sum_P c_P P` from (string, coefficient) pairs.
pub fn pauli_sum<I>(terms: I) -> Matrix8
where
    I: IntoIterator<Item = (PauliString, f64)>,
{
    terms
        .into_iter()
        .map(|(p, c)| p.matrix().scale_real(c))
        .sum()
}
