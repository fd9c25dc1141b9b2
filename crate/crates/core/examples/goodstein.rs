//! Generalized Goodstein sequences with both paths side by side.

use num_bigint::BigUint;
use ordinal_goodstein::goodstein::{base_change, run_partial, run_u64};
use ordinal_goodstein::hierarchy::StepBudget;
use ordinal_goodstein::Result;

fn main() -> Result<()> {
    print!("{}", run_u64(3, 2, 20)?.to_text());

    let four = BigUint::from(4u32);
    println!("4 changed from base 2 to 3: {}", base_change(&four, 2, 3, &mut StepBudget::default())?);

    let (trace, err) = run_partial(&BigUint::from(5u32), 3, 8, &mut StepBudget::default());
    println!("seed 5, base 3, first {} values: {}", trace.steps.len(), trace.values().join(", "));
    if let Some(e) = err {
        println!("stopped: {e}");
    }
    Ok(())
}
