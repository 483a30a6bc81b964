//! Prints mean symmetry scores for a few generator settings. Handy when
//! tuning the synthetic walker.

use gaitsym_core::pipeline::{process_sequence, PipelineConfig};
use gaitsym_core::synth::{generate, AsymmetryKind, AsymmetrySpec, GaitParams};
use gaitsym_core::Side;

fn main() {
    let cfg = PipelineConfig::default();
    let kinds = [
        (AsymmetryKind::PhaseShift, [0.0, 0.1, 0.2, 0.3].iter().map(|m| m * std::f64::consts::PI).collect::<Vec<_>>()),
        (AsymmetryKind::AmplitudeScale, vec![0.0, 0.15, 0.30, 0.45]),
        (AsymmetryKind::LegLengthDelta, vec![0.0, 0.03, 0.06, 0.09]),
    ];
    for (kind, mags) in kinds {
        println!("{kind:?}");
        for seed in 0..5u64 {
            let params = GaitParams {
                seed,
                ..GaitParams::default()
            };
            let scores: Vec<f64> = mags
                .iter()
                .map(|&m| {
                    let asym = AsymmetrySpec::new(kind, Side::Left, m).unwrap();
                    let clouds = generate(&params, &asym, 600).unwrap();
                    process_sequence(&clouds, &cfg).unwrap().mean_score
                })
                .collect();
            let strs: Vec<String> = scores.iter().map(|s| format!("{s:.4}")).collect();
            println!("  seed {seed}: {}", strs.join("  "));
        }
    }
}
