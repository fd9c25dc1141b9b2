//! Fundamental sequences and the descent they induce.

use ordinal_goodstein::fundseq::{expand, fund_seq, fund_seq_nat, support};
use ordinal_goodstein::{parse, Result};

fn main() -> Result<()> {
    let e0 = parse("e0")?;
    for n in 0..4 {
        println!("e0[{n}] = {}", fund_seq_nat(&e0, n)?);
    }

    let w1 = parse("t0(W1+1)")?;
    println!("support of {w1} = {}", support(&w1)?);
    println!("{w1}[1] = {}", fund_seq_nat(&w1, 1)?);

    let big = parse("t1(W1+W1)")?;
    let zeta = parse("t0(t1(0))")?;
    println!("{big}[{zeta}] = {}", fund_seq(&big, &zeta)?);

    println!("descent of w^w at k=2:");
    for a in expand(&parse("t0(w)")?, 2, 12)? {
        println!("  {a}");
    }
    Ok(())
}
