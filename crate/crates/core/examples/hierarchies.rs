//! Slow-growing, predecessor and Hardy functions.

use num_bigint::BigUint;
use ordinal_goodstein::hierarchy::{h_k, hardy, pred, slow_growing, HardyConvention, StepBudget};
use ordinal_goodstein::{parse, Result};

fn main() -> Result<()> {
    for s in ["w", "t0(w)", "e0", "t0(e0)"] {
        let a = parse(s)?;
        let g2 = slow_growing(2, &a, &mut StepBudget::default())?;
        let g3 = slow_growing(3, &a, &mut StepBudget::default())?;
        println!("G2({s}) = {g2}, G3({s}) = {g3}, P2({s}) = {}", pred(2, &a)?);
    }

    let e1 = parse("t0(W1+1)")?;
    match slow_growing(2, &e1, &mut StepBudget::default()) {
        Ok(v) => println!("G2(e1) = {v}"),
        Err(e) => println!("G2(e1) is out of reach: {e}"),
    }

    for s in ["w", "w+1", "w+w", "t0(2)"] {
        let a = parse(s)?;
        let h = h_k(2, &a, &mut StepBudget::default())?;
        let hx = hardy(&a, &BigUint::from(2u32), HardyConvention::Shifted, &mut StepBudget::default())?;
        println!("h2({s}) = {h}, H_{s}(2) = {hx}");
    }

    let huge = slow_growing(5, &parse("e0")?, &mut StepBudget::new(10_000, 256));
    println!("G5(e0) with a 256-bit cap: {}", huge.map(|v| v.to_string()).unwrap_or_else(|e| e.to_string()));
    Ok(())
}
