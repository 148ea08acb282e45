//! Std companion to `regsynth-core`: wall clock, dataset and prediction
//! files, the benchmark harness and run reports behind the `synth` binary.

pub mod bench;
pub mod clock;
pub mod dataset;
pub mod predictions;
