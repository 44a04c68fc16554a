use mpwright_validation::*;

fn main() {
    let (c1, c1a) = criterion_1();
    let (c6, c6c) = criterion_6();
    let verdicts = vec![
        c1,
        c1a,
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        c6,
        c6c,
        criterion_7(),
        criterion_8(),
    ];
    for v in &verdicts {
        println!("{}", v.line());
    }
    let failed: Vec<&str> = verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect();
    println!(
        "acceptance: {} passed, {} failed{}",
        verdicts.len() - failed.len(),
        failed.len(),
        if failed.is_empty() { String::new() } else { format!(" ({})", failed.join(", ")) }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
