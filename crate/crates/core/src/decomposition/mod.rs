//! Collapse, copy, compress: the tracing product, equivalence of arrows and
//! arrow sets, the kernel with its codec, and the pinhole cascade product.

mod cascade;
mod certificate;
mod interchange;
mod kernel;
mod tracing;

pub use cascade::{pinhole_cascade, pinhole_cascade_unchecked, Cascade, RuleTable};
pub use certificate::{verify_emulation, CertificateSummary, EmulationCertificate};
pub use interchange::{
    check_interchange, d_relation, interchangeable, preimage_sets_equivalent, supporting_objects,
    verify_set_witness, InterchangeWitness, SetEquivalenceWitness,
};
pub use kernel::{
    build_kernel, object_classes, object_isomorphism, Codec, CodecSource, Kernel, KernelClass,
    KernelOptions, RepresentativeRule, Strategy, TopCodec,
};
pub use tracing::{tracing_product, LevelProduct};
