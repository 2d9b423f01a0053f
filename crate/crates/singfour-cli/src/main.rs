const USAGE: &str = "usage: singfour [CONFIG] [--key value]...

keys: mode problem lambda z tau epsilon grid z1_range z2_range radius nodes
      panel_order taper reference out timing scale";

fn main() {
    env_logger::init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "-h" || a == "--help") {
        println!("{USAGE}");
        return;
    }
    std::process::exit(singfour_cli::main_with_args(&args));
}
