//! The built-in scenario battery run by `rp suite`. Instance counts are kept
//! moderate so the whole battery runs in seconds; every scenario is a scaled
//! version of a claim the library's test suite verifies at full size.

use crate::Scenario;
use serde_json::json;

fn scenario(name: &str, module: &str, payload: serde_json::Value) -> Scenario {
    Scenario { name: name.to_string(), module: module.to_string(), payload, tolerances: None }
}

pub fn default_suite() -> Vec<Scenario> {
    vec![
        scenario(
            "kernel-exp-line-gram",
            "kernel",
            json!({"check": "exp_line_gram", "lambda": 1.0, "points": 48}),
        ),
        scenario(
            "kernel-periodic-fourier",
            "kernel",
            json!({"check": "periodic_fourier", "lambdas": [0.5, 1.0, 4.0],
                   "betas": [0.5, 1.0, 4.0], "n_max": 48}),
        ),
        scenario(
            "kernel-widder-positive",
            "kernel",
            json!({"check": "widder_interval", "measure": [[1.0, 1.0]], "half_width": 1.0,
                   "grid": 24}),
        ),
        scenario(
            "kernel-widder-negative-location",
            "kernel",
            json!({"check": "widder_interval", "measure": [[-1.0, 1.0]], "half_width": 1.0,
                   "grid": 24, "expect_group_not_psd": true}),
        ),
        scenario(
            "rphs-contraction-bound",
            "rphs",
            json!({"check": "contraction_bound", "instances": 60, "seed": 11}),
        ),
        scenario(
            "rphs-twisted-unitary",
            "rphs",
            json!({"check": "twisted_unitary", "instances": 20, "seed": 12}),
        ),
        scenario(
            "rphs-markov-agreement",
            "rphs",
            json!({"check": "markov_agreement", "instances": 40, "seed": 13}),
        ),
        scenario(
            "dilation-pairing",
            "dilation",
            json!({"check": "pairing_quadrature", "eigenvalues": [0.3, 2.0, 7.0],
                   "times": [0.1, 0.7, 2.0]}),
        ),
        scenario(
            "dilation-hardy",
            "dilation",
            json!({"check": "hardy", "eigenvalues": [0.3, 2.0, 7.0],
                   "points": [[0.4, 0.0], [1.0, 0.8], [2.5, -1.2], [0.7, 2.0], [3.0, 0.3]]}),
        ),
        scenario(
            "dilation-cesaro",
            "dilation",
            json!({"check": "cesaro", "atoms": [[0.0, 0.3], [2.0, 0.7]], "horizon": 1e3}),
        ),
        scenario(
            "kms-boundary-identity",
            "kms",
            json!({"check": "kms_identity", "beta": 1.7, "instances": 6, "times": 32,
                   "seed": 21}),
        ),
        scenario(
            "kms-extension",
            "kms",
            json!({"check": "extension", "beta": 2.0, "mus": [0.2, 0.5, 0.8], "grid": 16,
                   "half_dim": 2}),
        ),
        scenario(
            "kms-matsubara",
            "kms",
            json!({"check": "matsubara", "lambda": 1.0, "beta": 2.0, "n_max": 32,
                   "log2_samples": 18}),
        ),
        scenario(
            "sphere-hypergeometric-dual",
            "sphere",
            json!({"check": "hyp_dual", "a": 0.7, "b": 1.3, "c": 2.1, "points": 40}),
        ),
        scenario(
            "sphere-ball-gram-inside",
            "sphere",
            json!({"check": "ball_gram", "n": 3, "lambda": 0.9, "points": 30, "seed": 31}),
        ),
        scenario(
            "sphere-ball-gram-outside",
            "sphere",
            json!({"check": "ball_gram", "n": 3, "lambda": 1.3, "points": 30, "seed": 32,
                   "expect_not_psd": true}),
        ),
        scenario(
            "sphere-psi-gram",
            "sphere",
            json!({"check": "psi_gram", "n": 2, "m": 0.5, "points": 24, "seed": 33}),
        ),
        scenario(
            "sphere-constants",
            "sphere",
            json!({"check": "constants", "ns": [2.0, 3.0], "lambdas": [0.3, 0.7]}),
        ),
        scenario(
            "freefield-time-slice",
            "freefield",
            json!({"check": "theta_t_quadrature", "atoms": [[0.8, 1.0], [2.5, 0.3]],
                   "times": [0.3, 1.0, 2.0], "pbar": [0.2]}),
        ),
        scenario(
            "freefield-ode",
            "freefield",
            json!({"check": "ode", "m": 1.0, "xs": [0.5, 1.0, 3.0], "h": 1e-3}),
        ),
        scenario(
            "freefield-halfspace-line",
            "freefield",
            json!({"check": "halfspace", "atoms": [[1.0, 1.0]], "d": 1, "points": 24,
                   "seed": 41}),
        ),
        scenario(
            "freefield-halfspace-space",
            "freefield",
            json!({"check": "halfspace", "atoms": [[1.0, 1.0], [2.0, 1.0]], "d": 3,
                   "points": 24, "seed": 42}),
        ),
        scenario(
            "freefield-power-slopes",
            "freefield",
            json!({"check": "power_slopes", "s": 1.3}),
        ),
        scenario(
            "freefield-multiplicativity",
            "freefield",
            json!({"check": "multiplicativity", "single": [[1.3, 2.0]],
                   "mixture": [[1.0, 0.5], [2.0, 0.5]]}),
        ),
        scenario(
            "ospaths-markov",
            "ospaths",
            json!({"check": "markov", "lambda": 1.0,
                   "times": [0.0, 0.4, 1.0, 1.3, 2.2, 3.0, 4.5]}),
        ),
        scenario(
            "ospaths-sample-cov",
            "ospaths",
            json!({"check": "sample_cov", "lambda": 1.0, "times": [0.0, 0.5, 1.0, 2.0],
                   "paths": 20000, "seed": 51}),
        ),
        scenario("ospaths-heat", "ospaths", json!({"check": "heat", "window": 5.0})),
        scenario(
            "ospaths-feynman-kac",
            "ospaths",
            json!({"check": "feynman_kac", "samples": 50000, "seed": 52}),
        ),
        scenario("ospaths-mehler", "ospaths", json!({"check": "mehler", "window": 5.0})),
        scenario(
            "ospaths-positive-semigroup",
            "ospaths",
            json!({"check": "pss", "trials": 200, "seed": 53, "a": 0.2, "b": 0.7}),
        ),
    ]
}
