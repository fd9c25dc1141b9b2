//! Hereditary base-k notation and the classical Goodstein process.

use num_bigint::BigUint;
use ordinal_goodstein::classical::{classical_base_change, classical_goodstein, hereditary, mc};
use ordinal_goodstein::hierarchy::StepBudget;
use ordinal_goodstein::Result;

fn main() -> Result<()> {
    for (n, k) in [(100u32, 3u64), (266, 2), (4, 2)] {
        let e = hereditary(&BigUint::from(n), k)?;
        println!("{n} in base {k}: {}  (mc {})", e.to_omega_string(), mc(&e));
    }
    println!("4 from base 2 to 3: {}", classical_base_change(&BigUint::from(4u32), 2, 3)?);

    let run = classical_goodstein(&BigUint::from(4u32), 2, 12, &StepBudget::default())?;
    println!("seed 4: {}", run.values().join(", "));
    Ok(())
}
