//! End-to-end decomposition of a loaded functor file, and its reports.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::Serialize;

use crate::decomposition::{
    build_kernel, pinhole_cascade_unchecked, tracing_product, Cascade, CertificateSummary,
    CodecSource, EmulationCertificate, Kernel, KernelOptions, LevelProduct, Strategy,
};
use crate::error::Error;
use crate::format::{resolve_encodes, FormatError, FunctorSpec, LoadedFunctor};
use crate::relational::RelationalFunctor;
use crate::semigroupoid::Semigroupoid;
use crate::transformation::{pinhole_typed_semigroupoid, Pinhole, TransformationSemigroupoid};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Model(#[from] Error),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Format(e) => e.exit_code(),
            PipelineError::Model(_) => 1,
        }
    }
}

/// The functor to decompose: the file's functor, or `ψ` of the pinhole typing
/// when the file describes a morphism of transformation semigroups.
pub fn functor_of(loaded: &LoadedFunctor) -> Result<(RelationalFunctor, Option<Pinhole>), Error> {
    match &loaded.spec {
        FunctorSpec::Abstract(phi) => Ok((phi.clone(), None)),
        FunctorSpec::Morphism(m) => {
            let pinhole = pinhole_typed_semigroupoid(m)?;
            Ok((pinhole.psi.clone(), Some(pinhole)))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub functor: RelationalFunctor,
    pub pinhole: Option<Pinhole>,
    pub kernel: Kernel,
    pub cascade: Cascade,
    pub certificate: EmulationCertificate,
    pub tracing: LevelProduct,
}

pub fn decompose(
    loaded: &LoadedFunctor,
    strategy: Strategy,
) -> Result<Decomposition, PipelineError> {
    let (functor, pinhole) = functor_of(loaded)?;
    let mut options = KernelOptions::new(strategy);
    options.explicit = resolve_encodes(&loaded.encodes, &functor)?;
    let kernel = build_kernel(&functor, &options)?;
    let (cascade, certificate) = pinhole_cascade_unchecked(&functor, &kernel)?;
    let (tracing, _) = tracing_product(&functor)?;
    Ok(Decomposition {
        functor,
        pinhole,
        kernel,
        cascade,
        certificate,
        tracing,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub representative: String,
    pub members: Vec<String>,
    pub arrows: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub strategy: String,
    pub source_arrows: usize,
    pub target_arrows: usize,
    pub injective: bool,
    pub classes: Vec<ClassReport>,
    pub kernel_arrows: usize,
    pub bottom_objects: usize,
    /// States of the bottom component, when it acts on states.
    pub bottom_states: Option<usize>,
    pub cascade_arrows: usize,
    pub tracing_arrows: usize,
    pub equals_tracing_product: bool,
    pub certificate: CertificateSummary,
}

impl Decomposition {
    /// Same arrows and the same table as the tracing product.
    pub fn equals_tracing_product(&self) -> bool {
        self.cascade.product.pairs == self.tracing.pairs
            && self.cascade.product.semigroupoid == self.tracing.semigroupoid
    }

    /// The bottom component: kept arrows closed in the source, as functions on
    /// states when the source is a transformation semigroupoid.
    pub fn bottom(&self) -> (Semigroupoid, Option<TransformationSemigroupoid>) {
        let (sub, original) = self.kernel.semigroupoid();
        let concrete = self.pinhole.as_ref().map(|p| {
            let objects: Vec<usize> = sub
                .objects()
                .iter()
                .map(|o| {
                    p.ts.abstract_()
                        .object_by_label(&o.label)
                        .expect("sub-semigroupoid objects come from the source")
                })
                .collect();
            let sets = objects
                .iter()
                .map(|&o| p.ts.state_sets()[o].clone())
                .collect();
            let arrows = original
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let mut t = p.ts.transformation(a).clone();
                    t.dom = sub.dom(i);
                    t.cod = sub.cod(i);
                    (sub.arrow_label(i).to_string(), t)
                })
                .collect();
            TransformationSemigroupoid::new(sets, arrows)
                .expect("restriction of a valid semigroupoid")
        });
        (sub, concrete)
    }

    pub fn report(&self) -> DecompositionReport {
        let top = self.functor.target();
        let src = self.functor.source();
        let labels = |set: &mut dyn Iterator<Item = usize>, s: &Semigroupoid| -> Vec<String> {
            set.map(|a| s.arrow_label(a).to_string()).collect()
        };
        let classes = self
            .kernel
            .classes
            .iter()
            .map(|c| ClassReport {
                representative: top.arrow_label(c.representative).to_string(),
                members: labels(&mut c.members.iter().copied(), top),
                arrows: labels(&mut c.arrows.iter().copied(), src),
            })
            .collect();
        let (bottom, concrete) = self.bottom();
        DecompositionReport {
            strategy: self.kernel.strategy.to_string(),
            source_arrows: src.arrow_count(),
            target_arrows: top.arrow_count(),
            injective: self.functor.classify().injective,
            classes,
            kernel_arrows: self.kernel.arrow_set().len(),
            bottom_objects: bottom.object_count(),
            bottom_states: concrete.map(|ts| ts.state_sets().iter().map(|s| s.len()).sum()),
            cascade_arrows: self.cascade.arrow_count(),
            tracing_arrows: self.tracing.arrow_count(),
            equals_tracing_product: self.equals_tracing_product(),
            certificate: self.certificate.summary(),
        }
    }

    pub fn render_codec(&self) -> String {
        let top = self.functor.target();
        let src = self.functor.source();
        let mut out = String::new();
        for c in &self.kernel.codec.tops {
            let via = match &c.via {
                CodecSource::Identity => "identity".to_string(),
                CodecSource::SetWitness(w) => {
                    let pairs: Vec<String> = w
                        .forward
                        .iter()
                        .map(|(x, &f)| format!("{}:{}", src.object_label(*x), src.arrow_label(f)))
                        .collect();
                    format!("set equivalence, forward {}", pairs.join(" "))
                }
                CodecSource::ObjectConjugation(map) => {
                    let objs: BTreeSet<String> = map
                        .keys()
                        .map(|&x| src.object_label(x).to_string())
                        .collect();
                    format!(
                        "object conjugation over {}",
                        objs.into_iter().collect::<Vec<_>>().join(" ")
                    )
                }
                CodecSource::Explicit => "explicit".to_string(),
            };
            writeln!(out, "{}: {via}", top.arrow_label(c.top)).unwrap();
            for (&a, &b) in &c.enc {
                writeln!(out, "  {} -> {}", src.arrow_label(a), src.arrow_label(b)).unwrap();
            }
        }
        out
    }
}

impl DecompositionReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "strategy: {}", self.strategy).unwrap();
        writeln!(
            w,
            "functor: {} source arrows, {} top arrows, {}",
            self.source_arrows,
            self.target_arrows,
            if self.injective {
                "injective"
            } else {
                "not injective"
            }
        )
        .unwrap();
        writeln!(
            w,
            "kernel: {} arrows in {} classes",
            self.kernel_arrows,
            self.classes.len()
        )
        .unwrap();
        for c in &self.classes {
            writeln!(
                w,
                "  [{}] members {{{}}} arrows {{{}}}",
                c.representative,
                c.members.join(", "),
                c.arrows.join(", ")
            )
            .unwrap();
        }
        match self.bottom_states {
            Some(n) => writeln!(w, "bottom: {} objects, {} states", self.bottom_objects, n),
            None => writeln!(w, "bottom: {} objects", self.bottom_objects),
        }
        .unwrap();
        writeln!(w, "cascade: {} arrows", self.cascade_arrows).unwrap();
        writeln!(w, "tracing product: {} arrows", self.tracing_arrows).unwrap();
        if self.equals_tracing_product {
            writeln!(
                w,
                "note: cascade equals the tracing product (no compression)"
            )
            .unwrap();
        }
        let status = if self.certificate.valid {
            "valid"
        } else {
            "INVALID"
        };
        writeln!(w, "certificate: {status}").unwrap();
        for d in &self.certificate.defects {
            writeln!(w, "  {d}").unwrap();
        }
        out
    }
}
