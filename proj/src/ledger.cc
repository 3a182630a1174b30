#include "infomarket/ledger.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "infomarket/records.h"

namespace infomarket::ledger {

namespace {

records::json ToJson(const LedgerEntry& e) {
  records::json j;
  j["period"] = e.period;
  j["user"] = e.user;
  j["aggregator"] = e.aggregator;
  j["amount"] = records::MoneyJson(e.amount);
  j["pricing_mode"] = e.pricing_mode;
  return j;
}

}  // namespace

std::vector<LedgerEntry> ReadLedger(std::istream& in) {
  std::vector<LedgerEntry> out;
  records::ForEachJsonLine(in, [&](const records::json& j, size_t line) {
    LedgerEntry e;
    if (!j.contains("period") || !j["period"].is_number_integer())
      throw records::RecordError(line, "missing integer field 'period'");
    e.period = j["period"].get<int64_t>();
    e.user = j.value("user", "");
    e.aggregator = j.value("aggregator", "");
    e.amount = records::MoneyField(j, "amount");
    e.pricing_mode = j.value("pricing_mode", "");
    if (e.user.empty())
      throw records::RecordError(line, "missing field 'user'");
    if (e.amount < Money::Zero())
      throw records::RecordError(line, "negative amount");
    out.push_back(std::move(e));
  });
  return out;
}

std::vector<LedgerEntry> ReadLedgerFile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    return {};
  return ReadLedger(in);
}

void WriteLedger(std::ostream& out, const std::vector<LedgerEntry>& entries) {
  for (const LedgerEntry& e : entries)
    out << ToJson(e).dump() << '\n';
}

void AppendLedgerFile(const std::string& path,
                      const std::vector<LedgerEntry>& entries) {
  for (const LedgerEntry& e : entries) {
    if (e.amount < Money::Zero())
      throw std::invalid_argument("negative ledger amount for " + e.user);
  }
  std::ostringstream text;
  WriteLedger(text, entries);
  const std::string data = text.str();

  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0)
    throw std::runtime_error("cannot open ledger " + path + ": " +
                             std::strerror(errno));
  if (::flock(fd, LOCK_EX) != 0) {
    ::close(fd);
    throw std::runtime_error("cannot lock ledger " + path);
  }
  size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0 && errno == EINTR)
      continue;
    if (n <= 0) {
      ::flock(fd, LOCK_UN);
      ::close(fd);
      throw std::runtime_error("write to ledger " + path + " failed");
    }
    written += static_cast<size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

EarningsSummary Summarize(const std::vector<LedgerEntry>& entries) {
  EarningsSummary s;
  for (const LedgerEntry& e : entries) {
    s.per_user[e.user] += e.amount;
    ++s.payments_per_user[e.user];
    s.total += e.amount;
  }
  return s;
}

}  // namespace infomarket::ledger
