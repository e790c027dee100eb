//! Full-pipeline FER/AIN probe: generate, postselect, channel, MDR, decode.
//!
//! Usage: pipeline_probe <ensemble> <n> <frames> <gaussian|vps-k> <bp|lbp> <snr,...>

use ngrec_core::harness::{DataKind, Experiment, ExperimentConfig};
use ngrec_core::metldpc::{construct_matrix, load_ensemble_path, Schedule};
use ngrec_core::randsrc::SeedSpec;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 7 {
        eprintln!("usage: pipeline_probe <ensemble> <n> <frames> <kind> <bp|lbp> <snr,...>");
        std::process::exit(2);
    }
    let ensemble = load_ensemble_path(&args[1]).expect("ensemble");
    let n: usize = args[2].parse().unwrap();
    let frames: usize = args[3].parse().unwrap();
    let kind: DataKind = args[4].parse().unwrap();
    let schedule = match args[5].as_str() {
        "bp" => Schedule::Flooding,
        "lbp" => Schedule::Layered,
        other => panic!("bad schedule {other}"),
    };
    let snrs: Vec<f64> = args[6].split(',').map(|s| s.parse().unwrap()).collect();

    let h = construct_matrix(&ensemble, n, SeedSpec::new(7, u64::MAX - 1)).expect("construct");
    let config = ExperimentConfig {
        data_kind: kind,
        code_rate: ensemble.design_rate,
        snr_list: snrs,
        frame_bits: n,
        frames_per_point: frames,
        max_iter: 150,
        schedule,
        dim: 8,
        master_seed: 7,
        ..Default::default()
    };
    let exp = Experiment::new(config, h).expect("experiment");
    println!("kind,snr,frames,fer,ain,snr_note");
    for s in exp.run_fer_experiment().expect("campaign") {
        println!(
            "{kind},{},{},{:.4},{:.1},",
            s.snr, s.frames, s.fer, s.ain
        );
    }
}
