fn main() {
    std::process::exit(relsg::main_entry(std::env::args_os()));
}
