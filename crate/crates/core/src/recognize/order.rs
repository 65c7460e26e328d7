//! Complex sparsity-order classification: chordal graphs have order one;
//! otherwise the order is at most two exactly when every atom is a clique, a
//! `K_2` member or a `K_3` member.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::witness::{scan_forbidden, Family, Pattern, Witness, WitnessError, DEFAULT_CAP};

use super::{atom_decompose, f_decompose, is_chordal, AtomTree, Chordality, FDecomposition, FVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OrderClass {
    #[serde(rename = "ONE")]
    One,
    #[serde(rename = "AT_MOST_TWO")]
    AtMostTwo,
    #[serde(rename = "GREATER_THAN_TWO")]
    GreaterThanTwo,
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderClass::One => "ONE",
            OrderClass::AtMostTwo => "AT_MOST_TWO",
            OrderClass::GreaterThanTwo => "GREATER_THAN_TWO",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomClass {
    Complete,
    K2,
    K3,
    None,
}

impl fmt::Display for AtomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtomClass::Complete => "complete",
            AtomClass::K2 => "K2",
            AtomClass::K3 => "K3",
            AtomClass::None => "none",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error(transparent)]
    Witness(#[from] WitnessError),
    /// An atom outside `F` with no forbidden subgraph. Cannot happen for a
    /// correct implementation.
    #[error("atom {0} is not in F but contains no long hole and no D1-D4")]
    MissingWitness(VertexSet),
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderVerdict {
    pub class: OrderClass,
    pub atoms: AtomTree,
    /// One tag per atom, parallel to `atoms.atoms`.
    pub tags: Vec<AtomClass>,
    /// Perfect elimination ordering when the class is `ONE`.
    #[serde(serialize_with = "crate::graph::serialize_opt_labels")]
    pub peo: Option<Vec<usize>>,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Option<Witness>,
}

fn serialize_witness<S: serde::Serializer>(w: &Option<Witness>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Repr {
        pattern: Pattern,
        vertices: Vec<usize>,
    }
    match w {
        None => s.serialize_none(),
        Some(w) => s.serialize_some(&Repr { pattern: w.pattern(), vertices: w.vertices().iter().map(|v| v + 1).collect() }),
    }
}

/// Tags a graph without clique cut-set. Returns the `F` decomposition when
/// the atom is in `F` so callers can build witnesses from it.
pub fn classify_atom(g: &Graph) -> (AtomClass, FVerdict) {
    let verdict = f_decompose(g);
    let class = match &verdict {
        FVerdict::NotMember(_) => AtomClass::None,
        FVerdict::Member(d) => match d.k() {
            0 => AtomClass::Complete,
            1 => panic!("an F_1 member always has a clique cut-set"),
            2 => AtomClass::K2,
            3 if d.pairs.iter().all(|(x, y)| x.len() == 1 && y.len() == 1) => AtomClass::K3,
            _ => AtomClass::None,
        },
    };
    (class, verdict)
}

/// `D6` from four pairs, or `D5` from three pairs one of which has a side
/// with two vertices. Vertices are atom-local.
fn f_member_witness(g: &Graph, d: &FDecomposition) -> Witness {
    let first = |s: &VertexSet| s.as_slice()[0];
    if d.k() >= 4 {
        let vs = d.pairs[..4].iter().flat_map(|(x, y)| [first(x), first(y)]).collect();
        return Witness::new(g, Pattern::D(6), vs).expect("four pairs induce D6");
    }
    let (j, (x, y)) = d
        .pairs
        .iter()
        .enumerate()
        .find(|(_, (x, y))| x.len() > 1 || y.len() > 1)
        .expect("a K3-free F_3 atom has a non-singleton side");
    let (big, small) = if x.len() > 1 { (x, y) } else { (y, x) };
    let mut vs = vec![big.as_slice()[0], first(small), big.as_slice()[1]];
    for (i, (x, y)) in d.pairs.iter().enumerate() {
        if i != j {
            vs.extend([first(x), first(y)]);
        }
    }
    Witness::new(g, Pattern::D(5), vs).expect("P3 + 2K2 complement induces D5")
}

pub fn classify_order(g: &Graph) -> Result<OrderVerdict, OrderError> {
    classify_order_with_cap(g, DEFAULT_CAP)
}

/// Classifies `g`. `cap` bounds the size of an atom outside `F` that may be
/// searched for a long hole or `D1`..`D4`.
pub fn classify_order_with_cap(g: &Graph, cap: usize) -> Result<OrderVerdict, OrderError> {
    let atoms = atom_decompose(g);
    let mut tags = Vec::with_capacity(atoms.atoms.len());
    let mut witness = None;
    for atom in &atoms.atoms {
        let sub = g.induced_subgraph(atom).expect("atoms are nonempty");
        let (tag, verdict) = classify_atom(&sub);
        tags.push(tag);
        if tag != AtomClass::None || witness.is_some() {
            continue;
        }
        let local = match &verdict {
            FVerdict::Member(d) => f_member_witness(&sub, d),
            FVerdict::NotMember(_) => scan_forbidden(&sub, Family::CliqueSumF, cap)?
                .ok_or_else(|| OrderError::MissingWitness(atom.clone()))?,
        };
        witness = Some(local.lift(g, atom.as_slice())?);
    }
    let class;
    let mut peo = None;
    if witness.is_some() {
        class = OrderClass::GreaterThanTwo;
    } else if let Chordality::Chordal { peo: order } = is_chordal(g) {
        class = OrderClass::One;
        peo = Some(order);
    } else {
        class = OrderClass::AtMostTwo;
    }
    Ok(OrderVerdict { class, atoms, tags, peo, witness })
}
