#include <sstream>

#include "trollscope/error.hpp"
#include "trollscope/learners.hpp"
#include "trollscope/util/format.hpp"

namespace trollscope::learn {

Metrics compute_metrics(std::span<const Label> predicted, std::span<const Label> truth) {
  if (predicted.size() != truth.size()) {
    throw DataError("prediction count " + std::to_string(predicted.size()) + " differs from truth count " +
                    std::to_string(truth.size()));
  }
  if (predicted.empty()) throw DataError("no predictions to score");
  Metrics m;
  auto& c = m.confusion;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == Label::troll;
    const bool t = truth[i] == Label::troll;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  const auto n = static_cast<double>(predicted.size());
  m.accuracy = static_cast<double>(c.tp + c.tn) / n;
  if (c.tp + c.fp == 0) m.precision_undefined = true;
  else m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn == 0) m.recall_undefined = true;
  else m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

std::string eval_report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "fold,accuracy,precision,recall,f1,tp,fp,tn,fn\n";
  const auto row = [&](const std::string& name, const Metrics& m) {
    out << name << ',' << fmt::number(m.accuracy) << ',' << fmt::number(m.precision) << ','
        << fmt::number(m.recall) << ',' << fmt::number(m.f1) << ',' << m.confusion.tp << ',' << m.confusion.fp
        << ',' << m.confusion.tn << ',' << m.confusion.fn << '\n';
  };
  for (std::size_t i = 0; i < report.folds.size(); ++i) row(std::to_string(i + 1), report.folds[i]);
  row("all", report.aggregate);
  return out.str();
}

std::string eval_summary(const EvalReport& report) {
  const auto& m = report.aggregate;
  std::ostringstream out;
  out << "folds      " << report.folds.size() << '\n'
      << "accuracy   " << fmt::fixed(m.accuracy * 100, 1) << "%\n"
      << "precision  " << fmt::fixed(m.precision * 100, 1) << '%' << (m.precision_undefined ? " (undefined)" : "")
      << '\n'
      << "recall     " << fmt::fixed(m.recall * 100, 1) << '%' << (m.recall_undefined ? " (undefined)" : "")
      << '\n'
      << "f1         " << fmt::fixed(m.f1 * 100, 1) << "%\n"
      << "confusion  tp=" << m.confusion.tp << " fp=" << m.confusion.fp << " tn=" << m.confusion.tn
      << " fn=" << m.confusion.fn << '\n';
  return out.str();
}

}  // namespace trollscope::learn
