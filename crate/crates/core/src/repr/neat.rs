//! Neat reducts `Nr_n C`.

use crate::bao::{Elem, FiniteBao, Subalgebra};
use crate::error::{Error, Result};
use crate::signature::{decode_transformation, encode_transformation, Signature, UnaryOp};

/// Elements of `c` fixed by every `c_i` with `n ≤ i < m`, with the
/// operations of index below `n`. Substitutions `τ : n → n` come from
/// `τ` extended by the identity.
pub fn neat_reduct(c: &FiniteBao, n: usize) -> Result<FiniteBao> {
    Ok(neat_reduct_in(c, n)?.algebra)
}

/// The neat reduct with `elements[k]`, the element of `c` that is its
/// `k`-th element.
pub fn neat_reduct_in(c: &FiniteBao, n: usize) -> Result<Subalgebra> {
    let sig = c.signature();
    let m = sig.dim();
    if m == 0 {
        return Err(Error::invalid("neat reducts need cylindrifiers"));
    }
    if n == 0 || n > m {
        return Err(Error::invalid(format!("target dimension {n} outside 1..={m}")));
    }
    if n == m {
        return Ok(Subalgebra {
            elements: c.elements().collect(),
            algebra: c.clone(),
        });
    }
    let target = Signature::new(sig.kind, n)?;
    let high: Vec<Vec<Elem>> = (n..m)
        .map(|i| c.table(UnaryOp::Cyl(i as u8)).expect("cylindrifier").into_owned())
        .collect();
    let elements: Vec<Elem> = c
        .elements()
        .filter(|&x| high.iter().all(|t| t[x as usize] == x))
        .collect();
    let algebra = c.induced(
        target,
        &elements,
        |op| match op {
            UnaryOp::Subst(code) => {
                let mut tau = decode_transformation(code, n);
                tau.extend(n as u8..m as u8);
                Some(UnaryOp::Subst(encode_transformation(&tau)))
            }
            other => Some(other),
        },
        Some,
    )?;
    Ok(Subalgebra { elements, algebra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::SetAlgebra;
    use crate::signature::Kind;

    #[test]
    fn nr1_of_ca2_over_two_points() {
        let c = SetAlgebra::full(Kind::Ca, 2, 2).unwrap().to_bao().unwrap();
        let r = neat_reduct(&c, 1).unwrap();
        assert_eq!(r.size(), 4);
    }

    #[test]
    fn same_dimension_is_identity() {
        let c = SetAlgebra::full(Kind::Qea, 2, 2).unwrap().to_bao().unwrap();
        assert_eq!(neat_reduct(&c, 2).unwrap(), c);
    }
}
