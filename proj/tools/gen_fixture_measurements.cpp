// Generates a committed measurement CSV for one LV fixture: a deterministic
// seeded jitter around a nominal injection profile, re-solved with the
// nonlinear power flow at each timestamp.
//
// Usage: gen_fixture_measurements <network.json> <out.csv> <seed> <sigma_pu>
//          <bus_id=p_kw:q_kvar> ...

#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "gridflex/grid_model.hpp"
#include "gridflex/power_flow.hpp"

int main(int argc, char** argv) {
    if (argc < 5) {
        std::cerr << "usage: gen_fixture_measurements <network.json> <out.csv> <seed>"
                     " <sigma_pu> <bus_id=p_kw:q_kvar> ...\n";
        return 1;
    }
    std::ifstream in(argv[1], std::ios::binary);
    if (!in) {
        std::cerr << "cannot open " << argv[1] << "\n";
        return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    gridflex::GridModel model;
    try {
        model = gridflex::load_network(ss.str());
    } catch (const gridflex::ModelError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    std::map<std::string, std::pair<double, double>> nominal_kw;
    for (int a = 5; a < argc; ++a) {
        const std::string arg = argv[a];
        const auto eq = arg.find('='), colon = arg.find(':', eq);
        if (eq == std::string::npos || colon == std::string::npos) {
            std::cerr << "bad injection spec '" << arg << "'\n";
            return 1;
        }
        nominal_kw[arg.substr(0, eq)] = {std::stod(arg.substr(eq + 1, colon - eq - 1)),
                                         std::stod(arg.substr(colon + 1))};
    }

    const double kw_to_pu = 1e-3 / model.s_base_mva;
    const int samples = 288;          // one day at 10-minute cadence
    const long t0 = 1700000000;       // arbitrary fixed epoch start
    const long step = 600;
    std::mt19937_64 rng(std::stoull(argv[3]));
    std::normal_distribution<double> jitter(0.0, std::stod(argv[4]));  // pu

    std::ofstream out(argv[2], std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << argv[2] << "\n";
        return 1;
    }
    out.precision(17);
    out << "timestamp,element_id,kind,value_pu\n";

    for (int t = 0; t < samples; ++t) {
        gridflex::InjectionSet inj;
        inj.p.assign(model.num_buses(), 0.0);
        inj.q.assign(model.num_buses(), 0.0);
        for (int i = 0; i < model.num_buses(); ++i) {
            if (i == model.slack) continue;
            const auto it = nominal_kw.find(model.buses[i].id);
            const double p0 = it != nominal_kw.end() ? it->second.first * kw_to_pu : 0.0;
            const double q0 = it != nominal_kw.end() ? it->second.second * kw_to_pu : 0.0;
            inj.p[i] = p0 + jitter(rng);
            inj.q[i] = q0 + jitter(rng);
        }
        gridflex::OperatingPoint op;
        try {
            op = gridflex::solve_bfs(model, inj, 1e-12);
        } catch (const gridflex::NumericError& e) {
            std::cerr << "sample " << t << ": " << e.what() << "\n";
            return 1;
        }
        const long ts = t0 + t * step;
        for (int i = 0; i < model.num_buses(); ++i) {
            const std::string& id = model.buses[i].id;
            out << ts << "," << id << ",v," << op.v[i] << "\n";
            if (i == model.slack) {
                out << ts << "," << id << ",p," << op.p_slack << "\n";
                out << ts << "," << id << ",q," << op.q_slack << "\n";
            } else {
                out << ts << "," << id << ",p," << inj.p[i] << "\n";
                out << ts << "," << id << ",q," << inj.q[i] << "\n";
            }
        }
        for (int k = 0; k < model.num_branches(); ++k)
            out << ts << "," << model.branches[k].id << ",i," << op.i[k] << "\n";
    }
    return 0;
}
