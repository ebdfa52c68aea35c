#include "accd/ddsl/templates.hpp"

#include <charconv>

namespace accd::ddsl {

namespace {

std::string weight_decl(const std::string& metric) {
  return metric.rfind("Weighted", 0) == 0 ? "DSet wSet double 1 D;\n" : "";
}

std::string weight_arg(const std::string& metric) {
  return metric.rfind("Weighted", 0) == 0 ? "wSet" : "0";
}

std::string real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

std::string kmeans_source(std::size_t n, std::size_t k, std::size_t d, const std::string& metric) {
  return "DVar K int 1;\n"
         "DVar D int " + std::to_string(d) + ";\n"
         "DVar psize int " + std::to_string(n) + ";\n"
         "DVar csize int " + std::to_string(k) + ";\n"
         "DSet pSet float psize D;\n"
         "DSet cSet float csize D;\n" + weight_decl(metric) +
         "DSet distMat float psize csize;\n"
         "DSet idMat int psize csize;\n"
         "DSet pkMat int psize K;\n"
         "AccD_Iter(S){\n"
         "    S = false;\n"
         "    AccD_Comp_Dist(pSet, cSet, distMat, idMat, D, \"" + metric + "\", " + weight_arg(metric) + ");\n"
         "    AccD_Dist_Select(distMat, idMat, K, \"smallest\", pkMat);\n"
         "    AccD_Update(cSet, pSet, pkMat, S);\n"
         "}\n";
}

std::string knn_source(std::size_t m, std::size_t n, std::size_t d, std::size_t k,
                       const std::string& metric, data::Scope scope) {
  const char* scp = scope == data::Scope::Smallest ? "smallest" : "largest";
  return "DVar K int " + std::to_string(k) + ";\n"
         "DVar D int " + std::to_string(d) + ";\n"
         "DVar m int " + std::to_string(m) + ";\n"
         "DVar n int " + std::to_string(n) + ";\n"
         "DSet srcSet float m D;\n"
         "DSet trgSet float n D;\n" + weight_decl(metric) +
         "DSet distMat float m n;\n"
         "DSet idMat int m n;\n"
         "DSet knnMat int m K;\n"
         "AccD_Comp_Dist(srcSet, trgSet, distMat, idMat, D, \"" + metric + "\", " + weight_arg(metric) + ");\n"
         "AccD_Dist_Select(distMat, idMat, K, \"" + scp + "\", knnMat);\n";
}

std::string nbody_source(std::size_t n, std::size_t d, std::size_t steps, double radius,
                         const std::string& metric) {
  return "DVar D int " + std::to_string(d) + ";\n"
         "DVar n int " + std::to_string(n) + ";\n"
         "DVar steps int " + std::to_string(steps) + ";\n"
         "DVar R double " + real(radius) + ";\n"
         "DSet pSet float n D;\n" + weight_decl(metric) +
         "DSet distMat float n n;\n"
         "DSet idMat int n n;\n"
         "DSet nbrMat int n n;\n"
         "AccD_Iter(steps){\n"
         "    AccD_Comp_Dist(pSet, pSet, distMat, idMat, D, \"" + metric + "\", " + weight_arg(metric) + ");\n"
         "    AccD_Dist_Select(distMat, idMat, R, \"smallest\", nbrMat);\n"
         "    AccD_Update(pSet, nbrMat, S);\n"
         "}\n";
}

}  // namespace accd::ddsl
