//! Predictions for corpus groups, an embedding obstruction, and the explicit
//! M(16) witness checked against its predicted shape.

use traceforms::corpus;
use traceforms::field::Field;
use traceforms::oracle::{extension_obstruction, predict, prop92_witness, FieldProfile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prof = FieldProfile::declared(2);
    for (name, simple) in [("D8", false), ("M16", false), ("C4^2", false), ("A5", true), ("PSL(2,7)", true)] {
        let g = corpus::find(name).expect("corpus entry").build()?;
        let p = predict(&g, &prof, simple)?;
        println!("{name:>9}: forced {:<5} rule {:<4} {}", p.hyperbolic_forced, p.rule_fired.name(), p.provenance);
    }

    let f = Field::gf(5, 1)?.laurent(["X", "Y"])?;
    let d8 = corpus::find("D8").unwrap().build()?;
    let v = extension_obstruction(&f, &[f.var(0), f.var(1)], &d8)?;
    println!("D8 over {f} with [X, Y]: {}", v.message());

    let f = Field::gf(5, 1)?.laurent(["X"])?;
    let w = prop92_witness(&f, 4, None)?;
    println!("M(16) over {f}: trace class {}, matches: {}", w.trace_class.format(), w.matches);
    Ok(())
}
