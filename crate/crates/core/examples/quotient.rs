//! The ordinals of the k-quotient in increasing order.

use ordinal_goodstein::enumerate::enumerate_quotient;
use ordinal_goodstein::goodstein::{g_inverse, succ_in_quotient};
use ordinal_goodstein::hierarchy::{slow_growing, StepBudget};
use ordinal_goodstein::{format_term, Result, Term};
use num_bigint::BigUint;

fn main() -> Result<()> {
    for (n, a) in enumerate_quotient(2, 20)?.iter().enumerate() {
        let g = slow_growing(2, a, &mut StepBudget::default())?;
        println!("{n:>3}  G2 = {g:<3} {}", format_term(a, true));
    }

    let mut a = Term::zero();
    for _ in 0..8 {
        a = succ_in_quotient(&a, 3)?;
    }
    println!("eighth successor of 0 at k=3: {}", format_term(&a, true));

    let n = BigUint::from(7625597484987u64);
    println!("G3^-1({n}) = {}", format_term(&g_inverse(&n, 3)?, true));
    Ok(())
}
