use super::natural::{nat_map, NatMap};
use crate::abelian::{is_exact_at, AbHom, FgAbGroup};

/// One of the four exact sequences, evaluated at a fixed group.
#[derive(Clone, Debug)]
pub struct SequenceCheck {
    pub name: &'static str,
    pub shape: &'static str,
    /// Position of the first failing term, counted from the left, if any.
    pub failure: Option<usize>,
}

impl SequenceCheck {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `0 → X₁ → … → Xₙ → 0` for the chain of maps given.
fn check_chain(name: &'static str, shape: &'static str, maps: &[AbHom]) -> SequenceCheck {
    let failure = if !maps[0].is_injective() {
        Some(1)
    } else if let Some(k) = maps.windows(2).position(|w| !is_exact_at(&w[0], &w[1])) {
        Some(k + 2)
    } else if !maps.last().expect("nonempty chain").is_surjective() {
        Some(maps.len() + 1)
    } else {
        None
    };
    SequenceCheck { name, shape, failure }
}

/// The inclusion of the 2-torsion subgroup.
pub fn two_torsion_inclusion(a: &FgAbGroup) -> AbHom {
    AbHom::identity(a).scale(2).kernel().inclusion
}

/// The sequences E1–E4 at `A`.
pub fn exact_sequences(a: &FgAbGroup) -> Vec<SequenceCheck> {
    let m = |n: NatMap| nat_map(n, a);
    vec![
        check_chain("E1", "0 -> Sym2 A -> P(A) -> A -> 0", &[m(NatMap::J), m(NatMap::Q)]),
        check_chain(
            "E2",
            "0 -> Psi(A) -> A(x)A -> Lambda2 A -> 0",
            &[m(NatMap::PsiIncl), m(NatMap::Wedge)],
        ),
        check_chain(
            "E3",
            "0 -> Phi(A) -> Gamma(A) -> A(x)A -> Lambda2 A -> 0",
            &[m(NatMap::Iota), m(NatMap::Tau), m(NatMap::Wedge)],
        ),
        check_chain(
            "E4",
            "0 -> 2A -> A -> P(A) -> Gamma(A) -> 0",
            &[two_torsion_inclusion(a), m(NatMap::FPm), m(NatMap::Nu)],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        for s in ["0", "Z", "Z/2", "Z/4 + Z", "Z/2 + Z/6", "Z + Z"] {
            let a: FgAbGroup = s.parse().unwrap();
            for c in exact_sequences(&a) {
                assert!(c.holds(), "{} fails at {:?} on {s}", c.name, c.failure);
            }
        }
    }

    #[test]
    fn detects_a_broken_chain() {
        let a = FgAbGroup::cyclic(4);
        let c = check_chain("x", "", &[AbHom::identity(&a).scale(2)]);
        assert_eq!(c.failure, Some(1));
    }
}
