//! Levi-Civita, canonical and Kobayashi-Nomizu connections of a model.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::matrix::{tensor3_from_fn, zero_vec, PolyVec, Tensor3};
use crate::algebra::{rational, Poly};
use crate::model::LieGroupModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConnectionKind {
    LeviCivita,
    Canonical,
    KobayashiNomizu,
}

impl ConnectionKind {
    pub const ALL: [ConnectionKind; 3] = [
        ConnectionKind::LeviCivita,
        ConnectionKind::Canonical,
        ConnectionKind::KobayashiNomizu,
    ];

    /// Short name used on the command line and in reports.
    pub fn short(&self) -> &'static str {
        match self {
            ConnectionKind::LeviCivita => "lc",
            ConnectionKind::Canonical => "canonical",
            ConnectionKind::KobayashiNomizu => "kn",
        }
    }

    pub fn long(&self) -> &'static str {
        match self {
            ConnectionKind::LeviCivita => "levi_civita",
            ConnectionKind::Canonical => "canonical",
            ConnectionKind::KobayashiNomizu => "kobayashi_nomizu",
        }
    }

    /// Symbol used in text output: `nabla`, `nabla0`, `nabla1`.
    pub fn symbol(&self) -> &'static str {
        match self {
            ConnectionKind::LeviCivita => "nabla",
            ConnectionKind::Canonical => "nabla0",
            ConnectionKind::KobayashiNomizu => "nabla1",
        }
    }
}

impl fmt::Display for ConnectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.long())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown connection {0:?}; expected lc, canonical or kn")]
pub struct UnknownConnection(pub String);

impl FromStr for ConnectionKind {
    type Err = UnknownConnection;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConnectionKind::ALL
            .into_iter()
            .find(|k| k.short() == s || k.long() == s)
            .ok_or_else(|| UnknownConnection(s.to_string()))
    }
}

/// `∇_{e_i} e_j = Σ_k gamma[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionCoeffs {
    pub kind: ConnectionKind,
    pub gamma: Tensor3,
}

impl ConnectionCoeffs {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.gamma[i][j][k]
    }

    /// `∇_{e_i} v` for a coordinate vector `v`.
    pub fn along_basis(&self, i: usize, v: &PolyVec) -> PolyVec {
        let mut out = zero_vec();
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate() {
                let g = &self.gamma[i][j][k];
                if !g.is_zero() {
                    *slot += vj * g;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().flatten().flatten().all(Poly::is_zero)
    }
}

/// `(∇_{e_i} J) e_j = Σ_k nj[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NablaJ {
    pub nj: Tensor3,
}

impl NablaJ {
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.nj[i][j][k]
    }

    pub fn is_zero(&self) -> bool {
        self.nj.iter().flatten().flatten().all(Poly::is_zero)
    }
}

/// Levi-Civita connection from the left-invariant Koszul formula
/// `2g(∇_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)`.
pub fn levi_civita(m: &LieGroupModel) -> ConnectionCoeffs {
    let c = &m.structure;
    let half = rational(1, 2);
    let gamma = tensor3_from_fn(|i, j, k| {
        let e = |n: usize| rational(m.eps(n), 1);
        let lowered = &(&c.get(i, j, k).scale(&e(k)) - &c.get(j, k, i).scale(&e(i)))
            + &c.get(k, i, j).scale(&e(j));
        m.normalize(&lowered.scale(&(&half * &e(k))))
    });
    ConnectionCoeffs {
        kind: ConnectionKind::LeviCivita,
        gamma,
    }
}

/// `(∇_X J)Y = ∇_X(JY) - J∇_X Y` for any connection. With `J` diagonal the
/// `k`-th component is `(J_j - J_k) gamma[i][j][k]`.
pub fn covariant_derivative_of_j(m: &LieGroupModel, conn: &ConnectionCoeffs) -> NablaJ {
    NablaJ {
        nj: tensor3_from_fn(|i, j, k| {
            let factor = m.j(j) - m.j(k);
            conn.gamma[i][j][k].scale(&rational(factor, 1))
        }),
    }
}

/// `∇J` for the Levi-Civita connection.
pub fn nabla_j(m: &LieGroupModel, lc: &ConnectionCoeffs) -> NablaJ {
    debug_assert_eq!(lc.kind, ConnectionKind::LeviCivita);
    covariant_derivative_of_j(m, lc)
}

/// `∇⁰_X Y = ∇_X Y - 1/2 (∇_X J)(JY)`.
pub fn canonical(m: &LieGroupModel, lc: &ConnectionCoeffs, nj: &NablaJ) -> ConnectionCoeffs {
    let gamma = tensor3_from_fn(|i, j, k| {
        let corr = nj.nj[i][j][k].scale(&rational(m.j(j), 2));
        &lc.gamma[i][j][k] - &corr
    });
    ConnectionCoeffs {
        kind: ConnectionKind::Canonical,
        gamma,
    }
}

/// `∇¹_X Y = ∇⁰_X Y - 1/4 [(∇_Y J)(JX) - (∇_{JY} J)X]`.
pub fn kobayashi_nomizu(
    m: &LieGroupModel,
    _lc: &ConnectionCoeffs,
    nj: &NablaJ,
    can: &ConnectionCoeffs,
) -> ConnectionCoeffs {
    let gamma = tensor3_from_fn(|i, j, k| {
        // (∇_{e_j} J)(J e_i) = J_i nj[j][i], (∇_{J e_j} J) e_i = J_j nj[j][i]
        let corr = nj.nj[j][i][k].scale(&rational(m.j(i) - m.j(j), 4));
        &can.gamma[i][j][k] - &corr
    });
    ConnectionCoeffs {
        kind: ConnectionKind::KobayashiNomizu,
        gamma,
    }
}

/// Runs the connection pipeline up to the requested kind.
pub fn connection(m: &LieGroupModel, kind: ConnectionKind) -> ConnectionCoeffs {
    let lc = levi_civita(m);
    if kind == ConnectionKind::LeviCivita {
        return lc;
    }
    let nj = nabla_j(m, &lc);
    let can = canonical(m, &lc, &nj);
    if kind == ConnectionKind::Canonical {
        return can;
    }
    kobayashi_nomizu(m, &lc, &nj, &can)
}

/// `T[i][j][k] = gamma[i][j][k] - gamma[j][i][k] - C[i][j][k]`.
pub fn torsion(m: &LieGroupModel, conn: &ConnectionCoeffs) -> Tensor3 {
    tensor3_from_fn(|i, j, k| {
        m.normalize(&(&(&conn.gamma[i][j][k] - &conn.gamma[j][i][k]) - m.structure.get(i, j, k)))
    })
}

/// `eps_k gamma[i][j][k] + eps_j gamma[i][k][j]`; identically zero iff the
/// connection preserves the metric.
pub fn metricity(m: &LieGroupModel, conn: &ConnectionCoeffs) -> Tensor3 {
    tensor3_from_fn(|i, j, k| {
        &conn.gamma[i][j][k].scale(&rational(m.eps(k), 1))
            + &conn.gamma[i][k][j].scale(&rational(m.eps(j), 1))
    })
}

pub fn tensor_is_zero(t: &Tensor3) -> bool {
    t.iter().flatten().flatten().all(Poly::is_zero)
}
