//! Inverting fundamental sequences, iteration counts and quotient membership.

use ordinal_goodstein::inversion::{imc, invert_all, member_tk};
use ordinal_goodstein::{parse, Result};

fn main() -> Result<()> {
    for s in ["t0(w)", "t0(e0)", "t0(w+1)", "t0(t0(e0)+1)"] {
        let a = parse(s)?;
        println!("{s}: imc {}, in T[2] {}, in T[3] {}", imc(&a)?, member_tk(&a, 2)?, member_tk(&a, 3)?);
        for c in invert_all(&a)? {
            println!("    = {}[{}]  ({:?})", c.beta, c.zeta, c.case);
        }
    }
    Ok(())
}
