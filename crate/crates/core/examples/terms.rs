//! Parsing, printing and comparing terms.

use ordinal_goodstein::term::{chi, compare, degree, star};
use ordinal_goodstein::{format_term, parse, Result};

fn main() -> Result<()> {
    let terms = ["0", "3", "w", "w+1", "t0(w+1)", "e0", "t0(e0)", "t0(W1+1)", "W1", "t1(W1)"];
    let mut parsed = terms.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
    for (src, a) in terms.iter().zip(&parsed) {
        println!(
            "{src:>10}  canonical {:<16} sugar {:<12} degree {} star0 {} chi1 {}",
            a.to_string(),
            format_term(a, true),
            degree(a),
            star(0, a),
            chi(1, a)
        );
    }
    parsed.sort_by(compare);
    let order: Vec<_> = parsed.iter().map(|a| format_term(a, true)).collect();
    println!("sorted: {}", order.join(" < "));
    Ok(())
}
