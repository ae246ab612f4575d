//! Exact checks of the decomposition pipeline on bundled and random functors.

use std::sync::Arc;

use serde::Serialize;

use crate::decomposition::{
    build_kernel, pinhole_cascade_unchecked, tracing_product, KernelOptions, Strategy,
};
use crate::fixtures;
use crate::format::{FunctorSpec, SgdDocument};
use crate::pipeline::functor_of;
use crate::random;
use crate::relational::RelationalFunctor;
use crate::transformation::TransformationSemigroupoid;

pub type Check = Result<(), String>;

/// The tracing product's embedding validates and is injective.
pub fn tracing_embeds(phi: &RelationalFunctor) -> Check {
    let (_, cert) = tracing_product(phi).map_err(|e| e.to_string())?;
    if !cert.valid() {
        return Err(cert.describe().join("; "));
    }
    if !cert.functor.classify().injective {
        return Err("embedding is not injective".into());
    }
    Ok(())
}

/// Without compression the cascade is the tracing product, arrows and table alike.
pub fn uncompressed_is_tracing(phi: &RelationalFunctor) -> Check {
    let kernel =
        build_kernel(phi, &KernelOptions::new(Strategy::None)).map_err(|e| e.to_string())?;
    let (cascade, cert) = pinhole_cascade_unchecked(phi, &kernel).map_err(|e| e.to_string())?;
    let (tracing, _) = tracing_product(phi).map_err(|e| e.to_string())?;
    if cascade.product.pairs != tracing.pairs
        || cascade.product.semigroupoid != tracing.semigroupoid
    {
        return Err("cascade differs from the tracing product".into());
    }
    if !cert.valid() {
        return Err(cert.describe().join("; "));
    }
    Ok(())
}

/// `dec_f(enc_f(a)) = a` on each preimage and `enc_f(dec_f(b)) = b` on each image.
pub fn codec_identities(phi: &RelationalFunctor, strategy: Strategy) -> Check {
    let kernel = build_kernel(phi, &KernelOptions::new(strategy)).map_err(|e| e.to_string())?;
    let codec = &kernel.codec;
    for (f, pre) in kernel.preimages.iter().enumerate() {
        for &a in pre {
            let b = codec.encode(f, a).map_err(|e| e.to_string())?;
            if codec.decode(f, b) != Ok(a) {
                return Err(format!("decode after encode moves arrow {a} under top {f}"));
            }
        }
        for b in codec.tops[f].encoded_set() {
            let a = codec.decode(f, b).map_err(|e| e.to_string())?;
            if codec.encode(f, a) != Ok(b) {
                return Err(format!("encode after decode moves arrow {b} under top {f}"));
            }
        }
    }
    Ok(())
}

/// The composite of two valid functors validates.
pub fn chain_closure(first: &RelationalFunctor, second: &RelationalFunctor) -> Check {
    let composite = first.compose(second).map_err(|e| e.to_string())?;
    match composite.validate().first() {
        Some(v) => Err(v.describe(&composite)),
        None => Ok(()),
    }
}

/// Certificate of a compressing strategy; a failure here is a finding, not an error.
pub fn compressed_certificate(phi: &RelationalFunctor, strategy: Strategy) -> Check {
    let kernel = build_kernel(phi, &KernelOptions::new(strategy)).map_err(|e| e.to_string())?;
    let (_, cert) = pinhole_cascade_unchecked(phi, &kernel).map_err(|e| e.to_string())?;
    if cert.valid() {
        Ok(())
    } else {
        Err(cert.describe().join("; "))
    }
}

fn closed(doc: SgdDocument) -> Arc<crate::semigroupoid::Semigroupoid> {
    match doc {
        SgdDocument::Abstract(s) => Arc::new(s),
        SgdDocument::Concrete(ts) if ts.validate().is_empty() => Arc::new(ts.abstract_().clone()),
        SgdDocument::Concrete(ts) => {
            let closure = TransformationSemigroupoid::generate_closure(
                ts.state_sets().to_vec(),
                ts.transformations()
                    .iter()
                    .enumerate()
                    .map(|(a, t)| (ts.label(a).to_string(), t.clone()))
                    .collect(),
            )
            .expect("bundled generators are typed");
            Arc::new(closure.abstract_().clone())
        }
    }
}

/// Named functors built from every bundled file: each semigroupoid (closed
/// under composition first) with its identity, type and trivial functors, and
/// each functor file with the functor it decomposes.
pub fn fixture_functors() -> Vec<(String, RelationalFunctor)> {
    let mut out = Vec::new();
    for (name, _) in fixtures::FILES {
        if name.ends_with(".sgd") {
            let s = closed(fixtures::sgd(name).expect("bundled file parses"));
            out.push((
                format!("{name} identity"),
                RelationalFunctor::identity(s.clone()),
            ));
            out.push((
                format!("{name} types"),
                RelationalFunctor::to_types(s.clone()),
            ));
            out.push((format!("{name} trivial"), RelationalFunctor::to_trivial(s)));
        } else {
            let loaded = fixtures::functor(name).expect("bundled file resolves");
            if let FunctorSpec::Morphism(m) = &loaded.spec {
                let phi = RelationalFunctor::new(
                    Arc::new(loaded.source.semigroupoid().clone()),
                    Arc::new(loaded.target.semigroupoid().clone()),
                    m.arrow_rel.clone(),
                )
                .expect("bundled arrow relation is typed");
                out.push((format!("{name} arrows"), phi));
            }
            let (phi, _) = functor_of(&loaded).expect("bundled functor is valid");
            out.push((name.to_string(), phi));
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RandomSummary {
    pub seed: u64,
    pub cases: usize,
    /// Exact properties that failed, with the case index.
    pub failures: Vec<String>,
    /// Compressing strategies whose certificate failed.
    pub findings: Vec<String>,
}

impl RandomSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!("seed {}, {} cases\n", self.seed, self.cases);
        out.push_str(&format!("exact failures: {}\n", self.failures.len()));
        for f in &self.failures {
            out.push_str(&format!("  {f}\n"));
        }
        out.push_str(&format!("findings: {}\n", self.findings.len()));
        for f in &self.findings {
            out.push_str(&format!("  {f}\n"));
        }
        out
    }
}

/// Runs every check on `cases` random functors and functor chains.
pub fn random_suite(seed: u64, cases: usize) -> RandomSummary {
    let mut rng = random::rng(seed);
    let mut summary = RandomSummary {
        seed,
        cases,
        ..Default::default()
    };
    for i in 0..cases {
        let (phi, next) = random::random_chain(&mut rng);
        let exact = [
            ("tracing embedding", tracing_embeds(&phi)),
            ("uncompressed cascade", uncompressed_is_tracing(&phi)),
            ("codec sets", codec_identities(&phi, Strategy::Sets)),
            ("codec objects", codec_identities(&phi, Strategy::Objects)),
            ("chain closure", chain_closure(&phi, &next)),
        ];
        for (name, check) in exact {
            if let Err(e) = check {
                summary.failures.push(format!("case {i}: {name}: {e}"));
            }
        }
        for strategy in [Strategy::Sets, Strategy::Objects] {
            if let Err(e) = compressed_certificate(&phi, strategy) {
                summary
                    .findings
                    .push(format!("case {i}: strategy {strategy}: {e}"));
            }
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_cover_every_file() {
        let names = fixture_functors();
        assert!(names.iter().any(|(n, _)| n == "z4phi.fun"));
        assert!(names.iter().any(|(n, _)| n == "tn3.sgd identity"));
    }

    #[test]
    fn small_random_run() {
        let summary = random_suite(11, 10);
        assert!(summary.passed(), "{}", summary.render());
    }
}
