use serde::Serialize;

use crate::relational::{FunctorViolation, RelationalFunctor};
use crate::semigroupoid::ArrowId;

/// A candidate emulation together with everything that is wrong with it.
#[derive(Clone, Debug)]
pub struct EmulationCertificate {
    pub functor: RelationalFunctor,
    pub violations: Vec<FunctorViolation>,
    /// `(f, g, shared)`: distinct source arrows whose images share `shared`.
    pub collisions: Vec<(ArrowId, ArrowId, ArrowId)>,
}

impl EmulationCertificate {
    pub fn valid(&self) -> bool {
        self.violations.is_empty() && self.collisions.is_empty()
    }

    /// One line per defect, empty when valid.
    pub fn describe(&self) -> Vec<String> {
        let s = self.functor.source();
        let t = self.functor.target();
        let mut out: Vec<String> = self
            .violations
            .iter()
            .map(|v| v.describe(&self.functor))
            .collect();
        out.extend(self.collisions.iter().map(|&(f, g, x)| {
            format!(
                "images of {} and {} share {}",
                s.arrow_label(f),
                s.arrow_label(g),
                t.arrow_label(x)
            )
        }));
        out
    }

    pub fn summary(&self) -> CertificateSummary {
        CertificateSummary {
            valid: self.valid(),
            source_arrows: self.functor.source().arrow_count(),
            target_arrows: self.functor.target().arrow_count(),
            defects: self.describe(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub valid: bool,
    pub source_arrows: usize,
    pub target_arrows: usize,
    pub defects: Vec<String>,
}

/// Checks compatibility, non-empty composites and pairwise-disjoint images.
pub fn verify_emulation(candidate: &RelationalFunctor) -> EmulationCertificate {
    EmulationCertificate {
        functor: candidate.clone(),
        violations: candidate.validate(),
        collisions: candidate.collisions(),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::semigroupoid::{ArrowSet, SemigroupoidBuilder};

    #[test]
    fn identity_is_an_emulation_and_collisions_are_reported() {
        let s = Arc::new(
            SemigroupoidBuilder::new()
                .object("*")
                .arrow("p", "*", "*")
                .arrow("z", "*", "*")
                .compose("p", "p", "p")
                .compose("p", "z", "z")
                .compose("z", "p", "z")
                .compose("z", "z", "z")
                .build()
                .unwrap(),
        );
        assert!(verify_emulation(&RelationalFunctor::identity(s.clone())).valid());

        let both = RelationalFunctor::new(
            s.clone(),
            s.clone(),
            vec![ArrowSet::from([1]), ArrowSet::from([1])],
        )
        .unwrap();
        let cert = verify_emulation(&both);
        assert!(!cert.valid());
        assert_eq!(cert.collisions, vec![(0, 1, 1)]);
        assert!(cert.describe()[0].contains("share z"));
    }
}
