fn main() {
    let (c, _) = gsc_core::oracles::random_circlelike(1, 3);
    let rep = c.validate(false);
    println!("valid: {} violations: {:?}", rep.is_valid(), rep.violations);
    println!("counts: {:?}", rep.per_height_counts);
    for (id, cell) in c.cells() {
        println!("{id}: h{} covers {:?} label {:?}", cell.height, cell.covers, cell.label);
    }
}
