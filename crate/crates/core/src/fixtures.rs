//! Named example inputs: small groupoids with their adjoint and trivial
//! coefficient modules and the regular graded algebra `T = B`.

use serde_json::Value;

use crate::ayd::{adjoint_module, trivial_at_identity, trivial_module, GradedBModule};
use crate::galois::StronglyGradedAlgebra;
use crate::groupoid_alg::{
    action_groupoid, build_bialgebroid, FinGroupoid, GSet, GroupoidBialgebroid,
};

pub const FIXTURE_NAMES: [&str; 5] = ["c2", "s3", "i2", "gset-swap", "gset-trivial"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub groupoid: FinGroupoid,
    /// Set for the action-groupoid fixtures.
    pub gset: Option<GSet>,
    pub bialgebroid: GroupoidBialgebroid,
}

pub fn fixture(name: &str) -> Option<Fixture> {
    let (groupoid, gset) = match name {
        "c2" => (FinGroupoid::cyclic_group(2), None),
        "s3" => (FinGroupoid::symmetric3(), None),
        "i2" => (FinGroupoid::pair(2), None),
        "gset-swap" => {
            let gs = GSet::swap();
            (action_groupoid(&gs).0, Some(gs))
        }
        "gset-trivial" => {
            let gs = GSet::trivial_pair();
            (action_groupoid(&gs).0, Some(gs))
        }
        _ => return None,
    };
    let bialgebroid = build_bialgebroid(&groupoid);
    Some(Fixture {
        name: name.to_string(),
        groupoid,
        gset,
        bialgebroid,
    })
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES
        .iter()
        .map(|n| fixture(n).expect("known name"))
        .collect()
}

impl Fixture {
    pub fn adjoint(&self) -> GradedBModule {
        adjoint_module(&self.bialgebroid)
    }

    /// Every stable aYD coefficient module shipped with the fixture.
    pub fn modules(&self) -> Vec<(String, GradedBModule)> {
        let mut out = vec![
            ("adjoint".to_string(), self.adjoint()),
            ("trivial".to_string(), trivial_module(&self.bialgebroid)),
        ];
        if self.groupoid.n_objects() == 1 {
            out.push((
                "trivial-at-id".to_string(),
                trivial_at_identity(&self.bialgebroid, 0),
            ));
        }
        out
    }

    pub fn graded(&self) -> StronglyGradedAlgebra {
        StronglyGradedAlgebra::from_bialgebroid(&self.bialgebroid)
    }

    /// File name and contents of each emitted JSON document.
    pub fn files(&self) -> Vec<(String, Value)> {
        let mut out = vec![
            (
                "groupoid.json".to_string(),
                serde_json::to_value(&self.groupoid).expect("plain data"),
            ),
            ("adjoint.json".to_string(), self.adjoint().to_json_value()),
            ("graded.json".to_string(), self.graded().to_json_value()),
        ];
        if let Some(gs) = &self.gset {
            out.push(("gset.json".to_string(), gs.to_json_value()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_cat::DEFAULT_GUARD;
    use crate::ayd::validate_ayd;
    use crate::galois::validate_galois;
    use crate::groupoid_alg::loops_orbits;

    #[test]
    fn shapes() {
        let c2 = fixture("c2").unwrap();
        assert_eq!((c2.groupoid.n_objects(), c2.groupoid.n_morphisms()), (1, 2));
        let s3 = fixture("s3").unwrap();
        assert_eq!(s3.groupoid.n_morphisms(), 6);
        assert_eq!(loops_orbits(&s3.groupoid).orbits.len(), 3);
        let swap = fixture("gset-swap").unwrap();
        assert!(swap
            .groupoid
            .is_isomorphic(&fixture("i2").unwrap().groupoid));
        assert!(fixture("d4").is_none());
    }

    #[test]
    fn everything_validates() {
        for f in all_fixtures() {
            for (name, m) in f.modules() {
                assert!(validate_ayd(&m, true).is_ok(), "{} {name}", f.name);
            }
            assert!(
                validate_galois(&f.graded(), DEFAULT_GUARD).is_ok(),
                "{}",
                f.name
            );
        }
    }

    #[test]
    fn files_roundtrip() {
        for f in all_fixtures() {
            let files = f.files();
            let text = |i: usize| serde_json::to_string(&files[i].1).unwrap();
            let g = FinGroupoid::from_json_str(&text(0)).unwrap();
            assert_eq!(g, f.groupoid);
            let m = GradedBModule::from_json_str(&f.bialgebroid, &text(1)).unwrap();
            assert_eq!(m, f.adjoint());
            assert_eq!(
                StronglyGradedAlgebra::from_json_str(&text(2)).unwrap(),
                f.graded()
            );
        }
    }
}
