#include "ots/solver.hpp"

#include <sys/types.h>
#include <sys/wait.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include <json.hpp>

#include "ots/errors.hpp"

namespace ots {

namespace {

using nlohmann::json;

json model_to_solver_json(const milp::ModelIR& model) {
  json j;
  j["n"] = model.num_vars();
  std::vector<int> binary;
  std::vector<double> lo, hi;
  for (int i = 0; i < model.num_vars(); ++i) {
    const auto& info = model.var(milp::VarRef{i});
    if (info.kind == milp::VarKind::Binary) binary.push_back(i);
    lo.push_back(info.lower);
    hi.push_back(info.upper);
  }
  j["binary"] = binary;
  j["lo"] = lo;
  j["hi"] = hi;

  json obj;
  std::vector<int> oidx;
  std::vector<double> ocoef;
  for (const auto& t : model.objective()) {
    oidx.push_back(t.var);
    ocoef.push_back(t.coef);
  }
  obj["idx"] = oidx;
  obj["coef"] = ocoef;
  j["obj"] = obj;

  json cons;
  std::vector<int> row_start{0}, col, sense;
  std::vector<double> coef, rhs;
  for (const auto& c : model.constraints()) {
    for (const auto& t : c.terms) {
      col.push_back(t.var);
      coef.push_back(t.coef);
    }
    row_start.push_back(static_cast<int>(col.size()));
    switch (c.sense) {
      case milp::Sense::LE: sense.push_back(0); break;
      case milp::Sense::EQ: sense.push_back(1); break;
      case milp::Sense::GE: sense.push_back(2); break;
    }
    rhs.push_back(c.rhs);
  }
  cons["row_start"] = row_start;
  cons["col"] = col;
  cons["coef"] = coef;
  cons["sense"] = sense;
  cons["rhs"] = rhs;
  j["cons"] = cons;
  return j;
}

std::filesystem::path locate_server_script() {
  if (const char* env = std::getenv("OTS_MILP_SERVER")) {
    std::filesystem::path p(env);
    if (std::filesystem::exists(p)) return p;
    throw BackendFailure("OTS_MILP_SERVER points to a missing file: " + std::string(env));
  }
  std::vector<std::filesystem::path> tried;
  std::error_code ec;
  const auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const auto bindir = exe.parent_path();
    for (const auto& candidate :
         {bindir / "milp_server.py", bindir / ".." / "share" / "ots" / "milp_server.py"}) {
      if (std::filesystem::exists(candidate)) return candidate;
      tried.push_back(candidate);
    }
  }
#ifdef OTS_SOURCE_TOOLS_DIR
  {
    const std::filesystem::path candidate =
        std::filesystem::path(OTS_SOURCE_TOOLS_DIR) / "milp_server.py";
    if (std::filesystem::exists(candidate)) return candidate;
    tried.push_back(candidate);
  }
#endif
  std::string message = "cannot locate milp_server.py; tried:";
  for (const auto& p : tried) message += " " + p.string();
  throw BackendFailure(message);
}

// Talks to a long-lived python child over pipes, one JSON object per line.
class PythonMilpBackend final : public SolverBackend {
 public:
  PythonMilpBackend() : script_(locate_server_script()) {
    // A dying child must surface as an I/O error, not kill the process.
    std::signal(SIGPIPE, SIG_IGN);
    start();
    json pong = roundtrip({{"cmd", "ping"}});
    if (!pong.value("ok", false))
      throw BackendFailure("MILP server failed its handshake: " + pong.dump());
  }

  ~PythonMilpBackend() override { stop(); }

  std::string name() const override { return "scipy"; }

  BackendResult solve(const milp::ModelIR& model, const BackendOptions& options) override {
    const auto model_path = write_model(model);
    json request = {{"id", next_id_++}, {"model", model_path.string()}};
    request["options"] = {{"rel_gap", options.rel_gap}, {"time_limit", options.time_limit_s}};
    json response;
    try {
      response = roundtrip(request);
    } catch (...) {
      std::filesystem::remove(model_path);
      throw;
    }
    std::filesystem::remove(model_path);

    BackendResult result;
    result.message = response.value("message", "");
    const std::string status = response.value("status", "error");
    if (status == "optimal")
      result.status = SolveStatus::Optimal;
    else if (status == "infeasible")
      result.status = SolveStatus::Infeasible;
    else if (status == "unbounded")
      result.status = SolveStatus::Unbounded;
    else if (status == "timeout")
      result.status = SolveStatus::TimeLimit;
    else
      result.status = SolveStatus::Error;
    if (response.contains("values")) {
      result.values = response["values"].get<std::vector<double>>();
      result.objective = response.value("objective", 0.0);
      result.gap = response.value("gap", 0.0);
      if (result.values.size() != static_cast<std::size_t>(model.num_vars()))
        throw BackendFailure("MILP server returned a wrong-size assignment");
    }
    return result;
  }

 private:
  void start() {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw BackendFailure("cannot create pipes for the MILP server");
    pid_ = fork();
    if (pid_ < 0) throw BackendFailure("cannot fork the MILP server");
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execlp("python3", "python3", script_.c_str(), static_cast<char*>(nullptr));
      perror("exec python3");
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    to_child_ = fdopen(to_child[1], "w");
    from_child_ = fdopen(from_child[0], "r");
    if (!to_child_ || !from_child_) throw BackendFailure("cannot open MILP server pipes");
  }

  void stop() {
    if (to_child_) {
      fputs("{\"cmd\": \"quit\"}\n", to_child_);
      fflush(to_child_);
      fclose(to_child_);
      to_child_ = nullptr;
    }
    if (from_child_) {
      fclose(from_child_);
      from_child_ = nullptr;
    }
    if (pid_ > 0) {
      int status = 0;
      waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  json roundtrip(const json& request) {
    const std::string line = request.dump() + "\n";
    if (fputs(line.c_str(), to_child_) == EOF || fflush(to_child_) != 0)
      throw BackendFailure("MILP server is not accepting requests (connection lost)");
    std::string reply;
    int ch;
    while ((ch = fgetc(from_child_)) != EOF && ch != '\n') reply.push_back(static_cast<char>(ch));
    if (reply.empty() && ch == EOF)
      throw BackendFailure(
          "MILP server produced no reply; python3 with scipy >= 1.9 is required");
    try {
      return json::parse(reply);
    } catch (const json::exception& ex) {
      throw BackendFailure(std::string("MILP server sent malformed JSON: ") + ex.what());
    }
  }

  std::filesystem::path write_model(const milp::ModelIR& model) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto path =
        dir / ("ots_model_" + std::to_string(getpid()) + "_" + std::to_string(next_id_) + ".json");
    std::ofstream out(path);
    if (!out) throw BackendFailure("cannot write model file " + path.string());
    out << model_to_solver_json(model);
    return path;
  }

  std::filesystem::path script_;
  pid_t pid_ = -1;
  FILE* to_child_ = nullptr;
  FILE* from_child_ = nullptr;
  int next_id_ = 1;
};

}  // namespace

std::unique_ptr<SolverBackend> make_backend(const std::string& name) {
  if (name == "auto" || name == "scipy") return std::make_unique<PythonMilpBackend>();
  std::string known;
  for (const auto& n : known_backends()) known += (known.empty() ? "" : ", ") + n;
  throw BackendFailure("unknown backend '" + name + "'; known: " + known);
}

std::vector<std::string> known_backends() { return {"auto", "scipy"}; }

}  // namespace ots
