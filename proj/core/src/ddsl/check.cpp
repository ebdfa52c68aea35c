#include "accd/ddsl/check.hpp"

#include <cfloat>
#include <limits>

#include "accd/data/metric.hpp"

namespace accd::ddsl {

namespace {

class Checker {
 public:
  CheckResult run(const Program& p) {
    for (const auto& d : p.decls) declare(d);
    for (const auto& c : p.body) {
      if (const auto* it = std::get_if<Iter>(&c)) {
        check_iter(*it);
      } else {
        std::visit(
            [&](const auto& n) {
              if constexpr (!std::is_same_v<std::decay_t<decltype(n)>, Iter>) check(n);
            },
            c);
      }
    }
    CheckResult r;
    r.diagnostics = std::move(diags_);
    bool errors = false;
    for (const auto& d : r.diagnostics) errors |= d.severity == Severity::Error;
    if (!errors) r.program = CheckedProgram{p, std::move(vars_), std::move(sets_), std::move(status_)};
    return r;
  }

 private:
  enum class Kind { Var, Set };

  void error(std::string msg, const Span& span) {
    diags_.push_back({Severity::Error, std::move(msg), span});
  }

  void undefined(const Ident& id) {
    if (reported_.insert(id.name).second) error("undefined identifier '" + id.name + "'", id.span);
  }

  void declare(const Decl& d) {
    const Ident& name = name_of(d);
    if (!kinds_.emplace(name.name, std::holds_alternative<VarDecl>(d) ? Kind::Var : Kind::Set).second) {
      error("redeclaration of '" + name.name + "'", name.span);
      return;
    }
    if (const auto* v = std::get_if<VarDecl>(&d)) {
      if (v->init) check_representable(*v);
      vars_[v->name.name] = {v->dtype, v->init};
      return;
    }
    const auto& s = std::get<SetDecl>(d);
    const auto size = resolve_count(s.size, "size");
    const auto dim = resolve_count(s.dim, "dimension");
    if (size && dim) sets_[s.name.name] = {s.dtype, *size, *dim};
  }

  void check_representable(const VarDecl& v) {
    const Literal& l = *v.init;
    switch (v.dtype) {
      case DType::Int32:
        if (!l.is_integer()) {
          error("initializer of int variable '" + v.name.name + "' is not an integer", l.span);
        } else if (const auto x = std::get<std::int64_t>(l.value);
                   x < std::numeric_limits<std::int32_t>::min() ||
                   x > std::numeric_limits<std::int32_t>::max()) {
          error("initializer of '" + v.name.name + "' does not fit in int", l.span);
        }
        break;
      case DType::Float32:
        if (std::abs(l.as_double()) > FLT_MAX) {
          error("initializer of '" + v.name.name + "' does not fit in float", l.span);
        }
        break;
      case DType::Float64:
        break;
    }
  }

  /// Integer value of a size reference: a literal or an initialized int DVar.
  std::optional<std::int64_t> resolve_int(const SizeRef& r) {
    if (!r.is_ident()) return r.integer();
    const Ident& id = r.ident();
    const auto k = kinds_.find(id.name);
    if (k == kinds_.end()) {
      undefined(id);
      return std::nullopt;
    }
    if (k->second != Kind::Var) {
      error("'" + id.name + "' is a data set; expected an integer", id.span);
      return std::nullopt;
    }
    const VarInfo& v = vars_.at(id.name);
    if (v.dtype != DType::Int32 || !v.value || !v.value->is_integer()) {
      error("'" + id.name + "' is not an initialized int variable", id.span);
      return std::nullopt;
    }
    return std::get<std::int64_t>(v.value->value);
  }

  std::optional<std::int64_t> resolve_count(const SizeRef& r, const char* what) {
    const auto v = resolve_int(r);
    if (v && *v < 1) {
      error(std::string(what) + " must be >= 1, got " + std::to_string(*v), r.span);
      return std::nullopt;
    }
    return v;
  }

  /// Looks up a data set; reports undefined or non-set identifiers.
  /// Returns nullptr also for sets whose shape failed to resolve.
  const SetInfo* set(const Ident& id, bool* declared = nullptr) {
    const auto k = kinds_.find(id.name);
    if (declared) *declared = k != kinds_.end() && k->second == Kind::Set;
    if (k == kinds_.end()) {
      undefined(id);
      return nullptr;
    }
    if (k->second != Kind::Set) {
      error("'" + id.name + "' is a variable; expected a data set", id.span);
      return nullptr;
    }
    const auto it = sets_.find(id.name);
    return it == sets_.end() ? nullptr : &it->second;
  }

  static std::string shape(std::int64_t r, std::int64_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
  }

  void expect_shape(const Ident& id, const SetInfo* s, std::int64_t rows, std::int64_t cols,
                    const std::string& role) {
    if (s && (s->size != rows || s->dim != cols)) {
      error(role + " '" + id.name + "' must be " + shape(rows, cols) + ", declared " +
                shape(s->size, s->dim),
            id.span);
    }
  }

  void check(const ComputeDist& c) {
    const SetInfo* src = set(c.src);
    const SetInfo* trg = set(c.trg);
    const SetInfo* dist = set(c.dist_mat);
    const SetInfo* ids = set(c.id_mat);
    const auto dim = resolve_count(c.dim, "dimension");
    if (src && trg && src->dim != trg->dim) {
      error("'" + c.src.name + "' and '" + c.trg.name + "' differ in dimension (" +
                std::to_string(src->dim) + " vs " + std::to_string(trg->dim) + ")",
            c.trg.span);
    } else if (dim && src && *dim != src->dim) {
      error("dimension " + std::to_string(*dim) + " does not match '" + c.src.name + "' (" +
                std::to_string(src->dim) + ")",
            c.dim.span);
    }
    if (src && trg) {
      expect_shape(c.dist_mat, dist, src->size, trg->size, "distance matrix");
      expect_shape(c.id_mat, ids, src->size, trg->size, "id matrix");
    }
    if (ids && ids->dtype != DType::Int32) error("id matrix '" + c.id_mat.name + "' must be int", c.id_mat.span);
    producers_[c.dist_mat.name] = {trg ? trg->size : 0, src ? src->size : 0};

    const auto metric = data::MetricSpec::from_string(c.metric.text);
    if (!metric) {
      error("unknown metric \"" + c.metric.text +
                "\"; expected \"Unweighted L1\", \"Unweighted L2\", \"Weighted L1\" or \"Weighted L2\"",
            c.metric.span);
      return;
    }
    if (!metric->weighted) {
      if (c.weights.is_ident() || c.weights.integer() != 0) {
        error("unweighted metric takes weights 0", c.weights.span);
      }
      return;
    }
    if (!c.weights.is_ident()) {
      error("weighted metric requires a 1 x d weight set", c.weights.span);
      return;
    }
    const SetInfo* w = set(c.weights.ident());
    const std::int64_t d = src ? src->dim : dim.value_or(0);
    if (w && d > 0) expect_shape(c.weights.ident(), w, 1, d, "weight set");
  }

  void check(const DistSelect& s) {
    const SetInfo* dist = set(s.dist_mat);
    const SetInfo* ids = set(s.id_mat);
    if (dist && ids && (dist->size != ids->size || dist->dim != ids->dim)) {
      error("id matrix '" + s.id_mat.name + "' must match '" + s.dist_mat.name + "' (" +
                shape(dist->size, dist->dim) + ")",
            s.id_mat.span);
    }
    std::int64_t n1 = dist ? dist->size : 0;
    std::int64_t n2 = dist ? dist->dim : 0;
    if (const auto p = producers_.find(s.dist_mat.name); p != producers_.end() && p->second.first > 0) {
      n2 = p->second.first;
      n1 = p->second.second;
    }

    std::int64_t k = 0;  // 0 when the range is not a usable count
    bool count = false;
    if (s.range.is_ident()) {
      const Ident& id = s.range.ident();
      const auto kind = kinds_.find(id.name);
      if (kind == kinds_.end()) {
        undefined(id);
      } else if (kind->second != Kind::Var) {
        error("'" + id.name + "' is a data set; expected a count or a radius", id.span);
      } else if (const VarInfo& v = vars_.at(id.name); !v.value) {
        error("'" + id.name + "' has no value", id.span);
      } else if (v.dtype == DType::Int32) {
        k = v.value->is_integer() ? std::get<std::int64_t>(v.value->value) : 0;
        count = true;
      } else if (!(v.value->as_double() > 0.0)) {
        error("radius '" + id.name + "' must be > 0", s.range.span);
      }
    } else {
      k = s.range.integer();
      count = true;
    }
    if (count && k < 1) {
      error("K must be >= 1, got " + std::to_string(k), s.range.span);
      k = 0;
    } else if (count && n2 > 0 && k > n2) {
      error("K = " + std::to_string(k) + " exceeds target set size " + std::to_string(n2),
            s.range.span);
      k = 0;
    }

    if (s.scope.text != "smallest" && s.scope.text != "largest") {
      error("scope must be \"smallest\" or \"largest\"", s.scope.span);
    }
    const SetInfo* out = set(s.out);
    if (out && n1 > 0 && out->size != n1) {
      error("output '" + s.out.name + "' must have " + std::to_string(n1) + " rows, declared " +
                std::to_string(out->size),
            s.out.span);
    } else if (out && k > 0 && out->dim != k) {
      error("output '" + s.out.name + "' must have " + std::to_string(k) + " columns, declared " +
                std::to_string(out->dim),
            s.out.span);
    }
  }

  void check(const Update& u) {
    for (std::size_t i = 0; i < u.operands.size(); ++i) {
      const Ident& id = u.operands[i];
      const bool last = i + 1 == u.operands.size();
      if (last && i > 0 && (!kinds_.contains(id.name) || status_.contains(id.name))) {
        status_.insert(id.name);
        continue;
      }
      set(id);
    }
  }

  void check_iter(const Iter& it) {
    std::optional<std::string> status;
    if (const auto* n = std::get_if<std::int64_t>(&it.control)) {
      if (*n < 1) error("iteration count must be >= 1", it.control_span);
    } else {
      const Ident& id = std::get<Ident>(it.control);
      if (kinds_.contains(id.name)) {
        resolve_count(SizeRef{id, id.span}, "iteration count");
      } else {
        status = id.name;
        bool set_in_body = false;
        for (const auto& s : it.body) {
          if (const auto* u = std::get_if<Update>(&s)) {
            set_in_body |= u->operands.size() > 1 && u->operands.back().name == id.name;
          }
        }
        if (!set_in_body) {
          error("exit status '" + id.name + "' is never set by AccD_Update in this loop", id.span);
        }
      }
    }
    if (it.status_init && (!status || it.status_init->var.name != *status)) {
      error("'" + it.status_init->var.name + "' is not the exit status of this loop",
            it.status_init->var.span);
    }
    for (const auto& s : it.body) std::visit([&](const auto& n) { check(n); }, s);
  }

  std::map<std::string, Kind> kinds_;
  std::map<std::string, VarInfo> vars_;
  std::map<std::string, SetInfo> sets_;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> producers_;  // dist matrix -> (n2, n1)
  std::set<std::string> status_;
  std::set<std::string> reported_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::string format_diagnostic(const Diagnostic& d, std::string_view file) {
  return std::string(file) + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col) +
         ": " + (d.severity == Severity::Error ? "error" : "warning") + ": " + d.message;
}

CheckResult validate(const Program& p) { return Checker{}.run(p); }

}  // namespace accd::ddsl
