#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ophom/jobs.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for graph/tree operads and cyclic homology"};
    app.require_subcommand(1);

    ophom::JobSpec spec;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--target", spec.target, "named object (Ger, M, Mcirc, Gra, vKGra, TwGra)");
        sub->add_option("--arity", spec.arity, "arity")->check(CLI::Range(1, 6));
        sub->add_option("--trunc", spec.trunc, "power/edge truncation");
        sub->add_option("--samples", spec.samples, "sample count for randomized checks");
        sub->add_option("--seed", spec.seed, "random seed (determines the whole run)");
        sub->add_option("--out", spec.output_path, "write the JSON report to a file");
    };

    CLI::App* dims = app.add_subcommand("dims", "dimension tables");
    add_common(dims);
    CLI::App* hom = app.add_subcommand("homology", "exact homology tables");
    add_common(hom);
    CLI::App* verify = app.add_subcommand("verify", "verification suites");
    add_common(verify);
    verify->add_option("--check", spec.check,
                       "homology-vs-grav | grav-dims | rotational-law | operad-axioms | sigma-order");
    CLI::App* act = app.add_subcommand("act", "apply a graph to multivector fields");
    add_common(act);
    act->add_option("--graph", spec.graph_path, "graph JSON file")->required();
    act->add_option("--inputs", spec.inputs_path, "JSON array of polyvector fields")->required();
    CLI::App* exp = app.add_subcommand("export", "serialize bases and matrices");
    add_common(exp);

    CLI11_PARSE(app, argc, argv);

    for (auto* sub : {dims, hom, verify, act, exp})
        if (sub->parsed()) spec.command = sub->get_name();

    ophom::JobResult res = ophom::run_job(spec);
    if (!spec.output_path.empty()) {
        std::ofstream out(spec.output_path);
        out << res.report_json;
    } else {
        std::cout << res.report_json;
    }
    return res.exit_code;
}
