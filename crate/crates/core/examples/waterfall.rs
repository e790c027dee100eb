//! FER/AIN waterfall probe for a shipped ensemble on a direct binary-input
//! AWGN channel (BPSK, llr = 2y/sigma^2), bypassing the reconciliation
//! mapping. Useful for placing a code's operating region before running the
//! full pipeline.
//!
//! Usage: waterfall <ensemble> <n> <frames> <max_iter> <bp|lbp> <snr>[,<snr>...]

use ngrec_core::metldpc::{decode_bp, decode_lbp, construct_matrix, load_ensemble_path, Schedule};
use ngrec_core::randsrc::{bit_block, gaussian_block, SeedSpec};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 7 {
        eprintln!("usage: waterfall <ensemble> <n> <frames> <max_iter> <bp|lbp> <snr,...>");
        std::process::exit(2);
    }
    let ensemble = load_ensemble_path(&args[1]).expect("ensemble");
    let n: usize = args[2].parse().unwrap();
    let frames: u64 = args[3].parse().unwrap();
    let max_iter: u32 = args[4].parse().unwrap();
    let schedule = match args[5].as_str() {
        "bp" => Schedule::Flooding,
        "lbp" => Schedule::Layered,
        other => panic!("bad schedule {other}"),
    };
    let snrs: Vec<f64> = args[6].split(',').map(|s| s.parse().unwrap()).collect();

    let t0 = std::time::Instant::now();
    let h = construct_matrix(&ensemble, n, SeedSpec::new(7, u64::MAX - 1)).expect("construct");
    eprintln!(
        "matrix n={} m={} edges={} layers={} built in {:.1}s",
        h.n(),
        h.m(),
        h.edge_count(),
        h.layers().len(),
        t0.elapsed().as_secs_f64()
    );

    println!("snr,beta,frames,fer,ain,sec_per_frame");
    for &snr in &snrs {
        let sigma2 = 1.0 / snr;
        let beta = 0.1_f64.max(ensemble.design_rate) / (0.5 * (1.0 + snr).log2());
        let t = std::time::Instant::now();
        let mut fails = 0u64;
        let mut iters = 0u64;
        for f in 0..frames {
            let bits = bit_block(n, SeedSpec::new(1000 + f, 0));
            let s = h.syndrome(&bits).unwrap();
            let noise = gaussian_block(n, sigma2, SeedSpec::new(1000 + f, 1)).unwrap();
            let llr: Vec<f64> = bits
                .iter()
                .zip(&noise)
                .map(|(&b, &z)| {
                    let x = if b == 0 { 1.0 } else { -1.0 };
                    2.0 * (x + z) / sigma2
                })
                .collect();
            let res = match schedule {
                Schedule::Flooding => decode_bp(&h, &llr, &s, max_iter).unwrap(),
                Schedule::Layered => decode_lbp(&h, &llr, &s, max_iter).unwrap(),
            };
            if !(res.converged && res.decoded_bits == bits) {
                fails += 1;
            }
            iters += res.iterations as u64;
        }
        println!(
            "{snr},{beta:.4},{frames},{:.4},{:.1},{:.2}",
            fails as f64 / frames as f64,
            iters as f64 / frames as f64,
            t.elapsed().as_secs_f64() / frames as f64
        );
    }
}
