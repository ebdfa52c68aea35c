#include "accd/ddsl/plan.hpp"
#include "accd/ddsl/parser.hpp"

#include "json.hpp"

#include "accd/error.hpp"

namespace accd::ddsl {

namespace {

SetRef set_ref(const CheckedProgram& cp, const std::string& name) {
  const auto it = cp.sets.find(name);
  if (it == cp.sets.end()) throw UnsupportedProgram("data set '" + name + "' has no resolved shape");
  return {name, it->second.dtype, static_cast<std::size_t>(it->second.size),
          static_cast<std::size_t>(it->second.dim)};
}

std::string where(const Span& s) {
  return std::to_string(s.line) + ":" + std::to_string(s.col) + ": ";
}

}  // namespace

const char* pipeline_kind_name(PipelineKind k) noexcept {
  switch (k) {
    case PipelineKind::IterativeTwoSet: return "iterative_two_set";
    case PipelineKind::OneshotTwoSet: return "oneshot_two_set";
    case PipelineKind::IterativeSelfSet: return "iterative_self_set";
  }
  return "?";
}

ExecutionPlan lower(const CheckedProgram& cp) {
  const Program& p = cp.program;
  const Iter* iter = nullptr;
  std::vector<Stmt> stmts;
  for (const auto& c : p.body) {
    if (const auto* it = std::get_if<Iter>(&c)) {
      if (iter) throw UnsupportedProgram(where(it->span) + "more than one AccD_Iter");
      iter = it;
      stmts.insert(stmts.end(), it->body.begin(), it->body.end());
    } else {
      std::visit(
          [&](const auto& n) {
            if constexpr (!std::is_same_v<std::decay_t<decltype(n)>, Iter>) stmts.emplace_back(n);
          },
          c);
    }
  }
  if (iter && p.body.size() > 1) {
    throw UnsupportedProgram(where(iter->span) + "constructs outside AccD_Iter are not supported");
  }

  const ComputeDist* comp = nullptr;
  const DistSelect* sel = nullptr;
  const Update* upd = nullptr;
  for (const auto& s : stmts) {
    if (const auto* c = std::get_if<ComputeDist>(&s)) {
      if (comp) throw UnsupportedProgram(where(c->span) + "more than one AccD_Comp_Dist");
      comp = c;
    } else if (const auto* d = std::get_if<DistSelect>(&s)) {
      if (sel) throw UnsupportedProgram(where(d->span) + "more than one AccD_Dist_Select");
      if (!comp) throw UnsupportedProgram(where(d->span) + "AccD_Dist_Select before AccD_Comp_Dist");
      sel = d;
    } else {
      const auto& u = std::get<Update>(s);
      if (upd) throw UnsupportedProgram(where(u.span) + "more than one AccD_Update");
      upd = &u;
    }
  }
  if (!comp) throw UnsupportedProgram("program computes no distances");
  if (!sel) throw UnsupportedProgram(where(comp->span) + "distances are never selected");
  if (sel->dist_mat.name != comp->dist_mat.name || sel->id_mat.name != comp->id_mat.name) {
    throw UnsupportedProgram(where(sel->span) + "AccD_Dist_Select does not consume the output of AccD_Comp_Dist");
  }

  ExecutionPlan plan;
  plan.source_set = set_ref(cp, comp->src.name);
  plan.target_set = set_ref(cp, comp->trg.name);
  plan.metric = *data::MetricSpec::from_string(comp->metric.text);
  if (plan.metric.weighted) plan.weight_set = comp->weights.ident().name;
  plan.dist_mat = comp->dist_mat.name;
  plan.id_mat = comp->id_mat.name;
  plan.output = sel->out.name;

  plan.select.scope = sel->scope.text == "largest" ? data::Scope::Largest : data::Scope::Smallest;
  if (sel->range.is_ident()) {
    const VarInfo& v = cp.vars.at(sel->range.ident().name);
    if (v.dtype == DType::Int32) {
      plan.select.k = static_cast<std::size_t>(std::get<std::int64_t>(v.value->value));
    } else {
      plan.select.kind = Selection::Kind::Radius;
      plan.select.radius = v.value->as_double();
    }
  } else {
    plan.select.k = static_cast<std::size_t>(sel->range.integer());
  }
  if (upd) plan.update_targets = {upd->operands.front().name};

  const bool self = comp->src.name == comp->trg.name;
  if (!iter) {
    plan.pipeline_kind = PipelineKind::OneshotTwoSet;
    if (plan.select.kind != Selection::Kind::Count) {
      throw UnsupportedProgram(where(sel->span) + "one-shot radius selection is not supported");
    }
    return plan;
  }

  if (!upd) throw UnsupportedProgram(where(iter->span) + "AccD_Iter without AccD_Update");
  if (const auto* n = std::get_if<std::int64_t>(&iter->control)) {
    plan.max_iter = static_cast<std::size_t>(*n);
  } else if (const auto& id = std::get<Ident>(iter->control); cp.status_vars.contains(id.name)) {
    plan.exit_status = id.name;
  } else {
    plan.max_iter = static_cast<std::size_t>(std::get<std::int64_t>(cp.vars.at(id.name).value->value));
  }

  if (self) {
    plan.pipeline_kind = PipelineKind::IterativeSelfSet;
    if (upd->operands.front().name != comp->src.name) {
      throw UnsupportedProgram(where(upd->span) + "self-set iteration must update '" + comp->src.name + "'");
    }
  } else {
    plan.pipeline_kind = PipelineKind::IterativeTwoSet;
    if (plan.select.kind != Selection::Kind::Count || plan.select.scope != data::Scope::Smallest) {
      throw UnsupportedProgram(where(sel->span) + "two-set iteration requires a smallest-K selection");
    }
    if (upd->operands.front().name != comp->trg.name) {
      throw UnsupportedProgram(where(upd->span) + "two-set iteration must update the target set '" +
                               comp->trg.name + "'");
    }
  }
  return plan;
}

std::string plan_to_json(const ExecutionPlan& plan, int indent) {
  auto set_json = [](const SetRef& s) {
    return nlohmann::ordered_json{{"name", s.name}, {"dtype", dtype_keyword(s.dtype)},
                                  {"size", s.size}, {"dim", s.dim}};
  };
  nlohmann::ordered_json j;
  j["pipeline_kind"] = pipeline_kind_name(plan.pipeline_kind);
  j["source_set"] = set_json(plan.source_set);
  j["target_set"] = set_json(plan.target_set);
  j["metric"] = {{"name", plan.metric.name()},
                 {"kind", plan.metric.kind == data::MetricKind::L1 ? "L1" : "L2"},
                 {"weighted", plan.metric.weighted}};
  if (plan.weight_set) j["metric"]["weight_set"] = *plan.weight_set;
  nlohmann::ordered_json sel;
  if (plan.select.kind == Selection::Kind::Count) {
    sel["range"] = "count";
    sel["k"] = plan.select.k;
  } else {
    sel["range"] = "radius";
    sel["radius"] = plan.select.radius;
  }
  sel["scope"] = plan.select.scope == data::Scope::Smallest ? "smallest" : "largest";
  j["select"] = sel;
  j["update_targets"] = plan.update_targets;
  j["max_iter"] = plan.max_iter ? nlohmann::ordered_json(*plan.max_iter) : nlohmann::ordered_json();
  j["exit_status"] = plan.exit_status ? nlohmann::ordered_json(*plan.exit_status) : nlohmann::ordered_json();
  j["dist_mat"] = plan.dist_mat;
  j["id_mat"] = plan.id_mat;
  j["output"] = plan.output;
  return j.dump(indent);
}

}  // namespace accd::ddsl

namespace accd::ddsl {

namespace {

std::string first_message(const std::vector<Diagnostic>& diagnostics) {
  return diagnostics.empty() ? std::string("validation failed")
                             : format_diagnostic(diagnostics.front(), "<program>");
}

}  // namespace

ValidationFailed::ValidationFailed(std::vector<Diagnostic> diagnostics)
    : Error(first_message(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ExecutionPlan compile(std::string_view source) {
  CheckResult checked = validate(parse(source));
  if (!checked.ok()) throw ValidationFailed(std::move(checked.diagnostics));
  return lower(*checked.program);
}

}  // namespace accd::ddsl
