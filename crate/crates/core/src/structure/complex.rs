use std::collections::BTreeMap;

use crate::bao::{BooleanPart, Elem, FiniteBao};
use crate::error::{Error, Result};
use crate::signature::{ConstOp, Kind, Signature, UnaryOp};
use crate::structure::{Atom, AtomStructure, CaAtomStructure, RaAtomStructure};

/// Largest atom count for [`complex_algebra`].
pub const MAX_COMPLEX_ATOMS: usize = 20;
/// Largest RA atom count for which the composition table is built.
pub const MAX_COMPOSITION_ATOMS: usize = 12;

/// Table of the additive extension of an atom map: `f(X) = U_{a in X} img(a)`.
fn lift(images: &[u64], atoms: usize) -> Vec<Elem> {
    let size = 1usize << atoms;
    let mut t = vec![0 as Elem; size];
    for x in 1..size {
        let low = x & x.wrapping_neg();
        t[x] = t[x ^ low] | images[low.trailing_zeros() as usize] as Elem;
    }
    t
}

/// The full complex algebra: all sets of atoms, operators as relational images.
pub fn complex_algebra(structure: &AtomStructure) -> Result<FiniteBao> {
    let k = structure.len();
    if k > MAX_COMPLEX_ATOMS {
        return Err(Error::guard("complex-algebra atoms", k as u128, MAX_COMPLEX_ATOMS as u128));
    }
    match structure {
        AtomStructure::Ra(s) => ra_complex(s),
        AtomStructure::Ca(s) => {
            let unary = s
                .relations()
                .iter()
                .map(|(&op, r)| (op, lift(r, k)))
                .collect();
            let constants = s
                .diagonals()
                .iter()
                .map(|(&(i, j), &m)| (ConstOp::Diag(i, j), m as Elem))
                .collect();
            FiniteBao::new(s.signature(), BooleanPart::Powerset { atoms: k as u32 }, unary, constants, None)
        }
    }
}

fn ra_complex(s: &RaAtomStructure) -> Result<FiniteBao> {
    let k = s.len();
    if k > MAX_COMPOSITION_ATOMS {
        return Err(Error::guard("RA complex-algebra atoms", k as u128, MAX_COMPOSITION_ATOMS as u128));
    }
    let size = 1usize << k;
    let conv: Vec<u64> = s.atoms().map(|a| 1u64 << s.converse(a)).collect();
    // atom-by-atom composition masks
    let mut ab = vec![0u64; k * k];
    for a in s.atoms() {
        for b in s.atoms() {
            let mut m = 0u64;
            for c in s.atoms() {
                if s.consistent(a, b, c) {
                    m |= 1 << c;
                }
            }
            ab[a as usize * k + b as usize] = m;
        }
    }
    // a ; Y for single atoms a, then X ; Y by splitting off the lowest atom of X
    let mut atom_row = vec![0 as Elem; k * size];
    for a in 0..k {
        let row = &mut atom_row[a * size..(a + 1) * size];
        for y in 1..size {
            let low = y & y.wrapping_neg();
            row[y] = row[y ^ low] | ab[a * k + low.trailing_zeros() as usize] as Elem;
        }
    }
    let mut comp = vec![0 as Elem; size * size];
    for x in 1..size {
        let low = x & x.wrapping_neg();
        let a = low.trailing_zeros() as usize;
        let (done, rest) = comp.split_at_mut(x * size);
        let prev = &done[(x ^ low) * size..((x ^ low) + 1) * size];
        let row = &mut rest[..size];
        for y in 0..size {
            row[y] = prev[y] | atom_row[a * size + y];
        }
    }
    let identity: Elem = s.identities().iter().fold(0, |m, &i| m | 1 << i);
    FiniteBao::new(
        Signature::ra(),
        BooleanPart::Powerset { atoms: k as u32 },
        BTreeMap::from([(UnaryOp::Converse, lift(&conv, k))]),
        BTreeMap::from([(ConstOp::Identity, identity)]),
        Some(comp),
    )
}

/// Atom structure of an atomic algebra with additive operators, read off
/// the tables of the `kind` reduct: `R_f = {(a, b) : b <= f(a)}`,
/// `D_ij = {a : a <= d_ij}`, and for RA `(a, b, c)` is consistent iff
/// `c <= a ; b`. Atoms are named `a0, a1, ...` in element order.
pub fn atom_structure_of(algebra: &FiniteBao, kind: Kind) -> Result<AtomStructure> {
    let info = algebra.atoms_of();
    if !info.is_atomic {
        return Err(Error::invalid("algebra is not atomic"));
    }
    let atoms = info.atoms;
    if atoms.len() > 64 {
        return Err(Error::guard("atoms", atoms.len() as u128, 64u128));
    }
    let sig = algebra.signature();
    let target = Signature::new(kind, sig.dim())?;
    if (kind == Kind::Ra) != (sig.kind == Kind::Ra) {
        return Err(Error::invalid(format!("cannot read a {kind} atom structure off a {sig} algebra")));
    }
    if let Some(v) = algebra.check_additivity().into_iter().find(|v| !v.additive) {
        return Err(Error::NonAdditive(v.operator));
    }
    let names: Vec<String> = (0..atoms.len()).map(|i| format!("a{i}")).collect();
    let below = |x: Elem| -> u64 {
        atoms
            .iter()
            .enumerate()
            .filter(|(_, &a)| algebra.leq(a, x))
            .fold(0u64, |m, (i, _)| m | 1 << i)
    };
    let single = |x: Elem, what: &str| -> Result<Atom> {
        let m = below(x);
        if m.count_ones() == 1 && atoms[m.trailing_zeros() as usize] == x {
            Ok(m.trailing_zeros() as Atom)
        } else {
            Err(Error::invalid(format!("{what} of an atom is not an atom")))
        }
    };
    if kind == Kind::Ra {
        let conv = algebra.table(UnaryOp::Converse).ok_or_else(|| Error::invalid("no converse"))?;
        let converse = atoms
            .iter()
            .map(|&a| single(conv[a as usize], "converse"))
            .collect::<Result<Vec<_>>>()?;
        let id = algebra.constant(ConstOp::Identity).ok_or_else(|| Error::invalid("no identity"))?;
        let id_mask = below(id);
        let identities: Vec<Atom> = (0..atoms.len() as Atom).filter(|&i| id_mask >> i & 1 == 1).collect();
        let comp: Vec<u64> = atoms
            .iter()
            .flat_map(|&a| atoms.iter().map(move |&b| (a, b)))
            .map(|(a, b)| below(algebra.compose(a, b)))
            .collect();
        let k = atoms.len();
        let s = RaAtomStructure::from_consistency(names, identities, converse, |a, b, c| {
            comp[a as usize * k + b as usize] >> c & 1 == 1
        })?;
        return Ok(s.into());
    }
    let mut relations = BTreeMap::new();
    for op in target.unary_roster() {
        let t = algebra
            .table(op)
            .ok_or_else(|| Error::invalid(format!("algebra lacks {}", op.name(sig.dim()))))?;
        relations.insert(op, atoms.iter().map(|&a| below(t[a as usize])).collect());
    }
    let mut diagonals = BTreeMap::new();
    for c in target.constant_roster() {
        if let ConstOp::Diag(i, j) = c {
            let d = algebra.constant(c).ok_or_else(|| Error::invalid(format!("algebra lacks {}", c.name())))?;
            diagonals.insert((i, j), below(d));
        }
    }
    Ok(CaAtomStructure::new(target, names, relations, diagonals)?.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::two_element;
    use crate::structure::{gen_rainbow, is_isomorphic};

    #[test]
    fn rainbow_one_one_complex_algebra_has_eight_elements() {
        let s: AtomStructure = gen_rainbow(1, 1).unwrap().into();
        let a = complex_algebra(&s).unwrap();
        assert_eq!(a.size(), 8);
        // r1 ; r1 = Id + g0, no red
        assert_eq!(a.compose(4, 4), 0b011);
        // g0 ; g0 = Id + r1, no green
        assert_eq!(a.compose(2, 2), 0b101);
        assert!(a.check_additivity().iter().all(|v| v.additive));
    }

    #[test]
    fn round_trip_on_rainbow() {
        let s: AtomStructure = gen_rainbow(1, 1).unwrap().into();
        let back = atom_structure_of(&complex_algebra(&s).unwrap(), Kind::Ra).unwrap();
        assert!(is_isomorphic(&s, &back).unwrap());
    }

    #[test]
    fn two_element_ra_has_the_single_identity_atom() {
        let s = atom_structure_of(&two_element(Signature::ra()).unwrap(), Kind::Ra).unwrap();
        let ra = s.as_ra().unwrap();
        assert_eq!(ra.len(), 1);
        assert!(ra.consistent(0, 0, 0));
        assert!(ra.validate().is_empty());
    }

    #[test]
    fn non_additive_tables_are_rejected() {
        let sig = Signature::new(Kind::Df, 1).unwrap();
        let a = two_element(sig).unwrap().with_unary(UnaryOp::Cyl(0), vec![1, 1]).unwrap();
        assert!(matches!(atom_structure_of(&a, Kind::Df), Err(Error::NonAdditive(_))));
    }
}
