//! Loads a translation-invariant MPS from JSON, here a deformed AKLT tensor,
//! and checks transfer-matrix expectations against the dense state.

use spto::linalg;
use spto::mps::transfer::spectrum;
use spto::mps::{
    correlation_length, dense_expectation, dense_state, expectation_chain, MpsTensor,
    Normalization, SiteOperator, DEFAULT_DENSE_CAP,
};

const TENSOR: &str = r#"{
  "d": 3, "D": 2,
  "A": [
    [[0, 0], [0.9, 0], [0, 0], [0, 0]],
    [[-0.5, 0], [0, 0], [0, 0], [0.5, 0]],
    [[0, 0], [0, 0], [-0.9, 0], [0, 0]]
  ]
}"#;

fn main() -> spto::Result<()> {
    let a = MpsTensor::from_json(TENSOR)?;
    let ev: Vec<String> = spectrum(&a)
        .iter()
        .map(|z| format!("{:+.6}", z.re))
        .collect();
    println!(
        "transfer spectrum [{}], xi = {:.6}",
        ev.join(", "),
        correlation_length(&a)?
    );

    let sz = linalg::real_mat(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
    let n = 8;
    let psi = dense_state(&a, n, DEFAULT_DENSE_CAP)?;
    println!("{:>3} {:>14} {:>14}", "r", "chain", "dense");
    for r in 1..n {
        let ops = [
            SiteOperator::new(0, sz.clone()),
            SiteOperator::new(r, sz.clone()),
        ];
        let chain = expectation_chain(&a, &ops, n, Normalization::Finite)?;
        let dense = dense_expectation(&psi, 3, n, &[(0, sz.clone()), (r, sz.clone())])?;
        println!("{r:>3} {:>14.10} {:>14.10}", chain.re, dense.re);
    }
    Ok(())
}
