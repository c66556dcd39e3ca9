use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{BasisKet, StateVector};
use crate::amplitude::{Scalar, FLOAT_TOLERANCE};
use crate::error::{Error, Result};

type Entries<A> = BTreeMap<(BasisKet, BasisKet), A>;

fn pruned<A: Scalar>(mut entries: Entries<A>) -> Entries<A> {
    entries.retain(|_, a| !a.is_zero());
    entries
}

fn accumulate<A: Scalar>(entries: &mut Entries<A>, key: (BasisKet, BasisKet), value: A) {
    let next = match entries.remove(&key) {
        Some(prev) => prev + value,
        None => value,
    };
    entries.insert(key, next);
}

/// Sparse operator over [`BasisKet`]s; absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<A: Scalar> {
    entries: Entries<A>,
}

impl<A: Scalar> Default for Operator<A> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<A: Scalar> Operator<A> {
    pub fn from_entries(entries: impl IntoIterator<Item = ((BasisKet, BasisKet), A)>) -> Self {
        let mut acc = BTreeMap::new();
        for (key, value) in entries {
            accumulate(&mut acc, key, value);
        }
        Self {
            entries: pruned(acc),
        }
    }

    pub fn identity_on<'a>(basis: impl IntoIterator<Item = &'a BasisKet>) -> Self {
        Self::from_entries(basis.into_iter().map(|k| ((*k, *k), A::one())))
    }

    /// `|ket⟩⟨bra|` scaled by `coef`.
    pub fn outer(ket: BasisKet, bra: BasisKet, coef: A) -> Self {
        Self::from_entries([((ket, bra), coef)])
    }

    pub fn entry(&self, row: &BasisKet, col: &BasisKet) -> A {
        self.entries
            .get(&(*row, *col))
            .cloned()
            .unwrap_or_else(A::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(BasisKet, BasisKet), &A)> {
        self.entries.iter()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_entries(self.entries.iter().map(|((r, c), a)| ((*c, *r), a.conj())))
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        let mut out = BTreeMap::new();
        for ((r, k), a) in &self.entries {
            for ((k2, c), b) in rhs.entries.range((*k, BasisKet::pair_min())..) {
                if k2 != k {
                    break;
                }
                accumulate(&mut out, (*r, *c), a.clone() * b.clone());
            }
        }
        Self {
            entries: pruned(out),
        }
    }

    pub fn sum(&self, rhs: &Self) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .chain(rhs.entries.iter())
                .map(|(k, a)| (*k, a.clone())),
        )
    }

    pub fn apply(&self, state: &StateVector<A>) -> StateVector<A> {
        StateVector::from_terms(
            self.entries.iter().filter_map(|((r, c), a)| {
                state.amps.get(c).map(|amp| (*r, a.clone() * amp.clone()))
            }),
        )
    }

    /// `K ρ K†`.
    pub fn conjugate(&self, rho: &DensityMatrix<A>) -> DensityMatrix<A> {
        let as_op = Operator {
            entries: rho.entries.clone(),
        };
        let out = self.compose(&as_op).compose(&self.adjoint());
        DensityMatrix {
            entries: out.entries,
        }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        entries_approx_eq(&self.entries, &other.entries)
    }
}

impl BasisKet {
    /// Smallest ket in the canonical order.
    pub(crate) const fn pair_min() -> Self {
        BasisKet::pair(super::PathLabel::S, super::PathLabel::S)
    }
}

fn entries_approx_eq<A: Scalar>(a: &Entries<A>, b: &Entries<A>) -> bool {
    let keys: BTreeSet<_> = a.keys().chain(b.keys()).collect();
    let zero = A::zero();
    keys.into_iter().all(|k| {
        a.get(k)
            .unwrap_or(&zero)
            .approx_eq(b.get(k).unwrap_or(&zero))
    })
}

/// Sparse density operator. Hermiticity is checked on demand by the
/// operations that rely on it.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<A: Scalar> {
    entries: Entries<A>,
}

impl<A: Scalar> DensityMatrix<A> {
    pub fn from_entries(entries: impl IntoIterator<Item = ((BasisKet, BasisKet), A)>) -> Self {
        Self {
            entries: Operator::from_entries(entries).entries,
        }
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn from_pure(state: &StateVector<A>) -> Result<Self> {
        if state.is_empty() || A::real_is_zero(state.norm_sq()) {
            return Err(Error::EmptyState);
        }
        let inv_norm = A::from_real(A::real_one() / state.norm_sq().clone());
        let mut entries = BTreeMap::new();
        for (a, x) in state.amplitudes() {
            for (b, y) in state.amplitudes() {
                entries.insert((*a, *b), inv_norm.clone() * x.clone() * y.conj());
            }
        }
        Ok(Self {
            entries: pruned(entries),
        })
    }

    pub fn entry(&self, row: &BasisKet, col: &BasisKet) -> A {
        self.entries
            .get(&(*row, *col))
            .cloned()
            .unwrap_or_else(A::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(BasisKet, BasisKet), &A)> {
        self.entries.iter()
    }

    /// Kets appearing in any nonzero entry.
    pub fn basis(&self) -> BTreeSet<BasisKet> {
        self.entries.keys().flat_map(|(r, c)| [*r, *c]).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.entries
            .iter()
            .all(|((r, c), a)| a.approx_eq(&self.entry(c, r).conj()))
    }

    fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NonHermitian)
        }
    }

    pub fn trace(&self) -> Result<A::Real> {
        self.require_hermitian()?;
        Ok(self.diagonal_weight(|_| true))
    }

    fn diagonal_weight(&self, mut predicate: impl FnMut(&BasisKet) -> bool) -> A::Real {
        self.entries
            .iter()
            .filter(|((r, c), _)| r == c && predicate(r))
            .fold(A::real_zero(), |acc, (_, a)| acc + a.real_part())
    }

    /// `tr(ρ²)`, which for Hermitian ρ is `Σ |ρ_ab|²`.
    pub fn purity(&self) -> Result<A::Real> {
        self.require_hermitian()?;
        Ok(self
            .entries
            .values()
            .fold(A::real_zero(), |acc, a| acc + a.norm_sq()))
    }

    /// Born-rule probability of the kets matching `predicate`, relative to
    /// the trace.
    pub fn probability(&self, predicate: impl FnMut(&BasisKet) -> bool) -> Result<A::Real> {
        let trace = self.trace()?;
        if A::real_is_zero(&trace) {
            return Err(Error::EmptyState);
        }
        Ok(self.diagonal_weight(predicate) / trace)
    }

    /// Unnormalized diagonal weight of the kets matching `predicate`.
    pub fn weight(&self, predicate: impl FnMut(&BasisKet) -> bool) -> A::Real {
        self.diagonal_weight(predicate)
    }

    /// Keeps rows and columns whose kets satisfy `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&BasisKet) -> bool) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|((r, c), _)| keep(r) && keep(c))
                .map(|(k, a)| (*k, a.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &A) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .map(|(k, a)| (*k, factor.clone() * a.clone())),
        )
    }

    pub fn sum(&self, rhs: &Self) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .chain(rhs.entries.iter())
                .map(|(k, a)| (*k, a.clone())),
        )
    }

    /// `ρ ↦ Σ ρ_ab U|a⟩ (U|b⟩)†` for a linear map given on basis kets.
    pub fn transform(
        &self,
        mut image: impl FnMut(&BasisKet) -> Result<StateVector<A>>,
    ) -> Result<Self> {
        let mut images = BTreeMap::new();
        for ket in self.basis() {
            images.insert(ket, image(&ket)?);
        }
        let mut out = BTreeMap::new();
        for ((r, c), rho) in &self.entries {
            for (k1, x) in images[r].amplitudes() {
                for (k2, y) in images[c].amplitudes() {
                    accumulate(&mut out, (*k1, *k2), rho.clone() * x.clone() * y.conj());
                }
            }
        }
        Ok(Self {
            entries: pruned(out),
        })
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        entries_approx_eq(&self.entries, &other.entries)
    }

    pub fn to_float(&self) -> Result<DensityMatrix<Complex64>> {
        let entries = self
            .entries
            .iter()
            .map(|(k, a)| Ok((*k, a.to_complex()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DensityMatrix::from_entries(entries))
    }

    /// Smallest eigenvalue, computed in double precision.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.require_hermitian()?;
        let basis: Vec<_> = self.basis().into_iter().collect();
        if basis.is_empty() {
            return Ok(0.0);
        }
        let index: BTreeMap<_, _> = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut m = DMatrix::<Complex64>::zeros(basis.len(), basis.len());
        for ((r, c), a) in &self.entries {
            m[(index[r], index[c])] = a.to_complex()?;
        }
        Ok(m.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    pub fn is_positive_semidefinite(&self) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -FLOAT_TOLERANCE)
    }
}
