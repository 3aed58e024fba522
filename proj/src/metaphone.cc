// Copyright 2026 The Lexnorm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexnorm/metaphone.h"

#include <cstddef>
#include <initializer_list>

#include "lexnorm/strdist.h"

namespace lexnorm {
namespace {

// Rule engine over an uppercased ASCII word. Positions are signed so rules
// can look behind the first letter; out-of-range lookups never match. The
// word is padded with spaces, which is what lets "VAN " style onsets match a
// bare "VAN".
class Encoder {
 public:
  explicit Encoder(std::string word)
      : length_(static_cast<ptrdiff_t>(word.size())),
        last_(length_ - 1),
        text_(std::move(word) + "     ") {
    slavo_germanic_ = text_.find('W') != std::string::npos ||
                      text_.find('K') != std::string::npos ||
                      text_.find("CZ") != std::string::npos;
  }

  PhoneticCode Run(size_t max_length);

 private:
  char At(ptrdiff_t pos) const {
    if (pos < 0 || pos >= static_cast<ptrdiff_t>(text_.size())) return '\0';
    return text_[static_cast<size_t>(pos)];
  }

  bool IsVowel(ptrdiff_t pos) const {
    switch (At(pos)) {
      case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
        return true;
      default:
        return false;
    }
  }

  bool Matches(ptrdiff_t start, std::initializer_list<std::string_view> options) const {
    if (start < 0 || start >= static_cast<ptrdiff_t>(text_.size())) return false;
    const std::string_view rest = std::string_view(text_).substr(static_cast<size_t>(start));
    for (std::string_view option : options) {
      if (rest.starts_with(option)) return true;
    }
    return false;
  }

  void Add(std::string_view both) { Add(both, both); }
  void Add(std::string_view primary, std::string_view secondary) {
    primary_ += primary;
    secondary_ += secondary;
  }

  ptrdiff_t HandleC(ptrdiff_t current);
  ptrdiff_t HandleD(ptrdiff_t current);
  ptrdiff_t HandleG(ptrdiff_t current);
  ptrdiff_t HandleH(ptrdiff_t current);
  ptrdiff_t HandleJ(ptrdiff_t current);
  ptrdiff_t HandleL(ptrdiff_t current);
  ptrdiff_t HandleM(ptrdiff_t current);
  ptrdiff_t HandleP(ptrdiff_t current);
  ptrdiff_t HandleR(ptrdiff_t current);
  ptrdiff_t HandleS(ptrdiff_t current);
  ptrdiff_t HandleT(ptrdiff_t current);
  ptrdiff_t HandleW(ptrdiff_t current);
  ptrdiff_t HandleX(ptrdiff_t current);
  ptrdiff_t HandleZ(ptrdiff_t current);

  // Advances past a doubled letter.
  ptrdiff_t Skip(ptrdiff_t current, char twin) const {
    return current + (At(current + 1) == twin ? 2 : 1);
  }

  const ptrdiff_t length_;
  const ptrdiff_t last_;
  const std::string text_;
  bool slavo_germanic_ = false;
  std::string primary_;
  std::string secondary_;
};

PhoneticCode Encoder::Run(size_t max_length) {
  ptrdiff_t current = 0;
  // Silent onsets.
  if (Matches(0, {"GN", "KN", "PN", "WR", "PS"})) current = 1;
  // Initial X sounds like S, as in Xavier.
  if (At(0) == 'X') {
    Add("S");
    current = 1;
  }

  while ((primary_.size() < max_length || secondary_.size() < max_length) &&
         current < length_) {
    switch (At(current)) {
      case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
        if (current == 0) Add("A");
        ++current;
        break;
      case 'B':
        Add("P");
        current = Skip(current, 'B');
        break;
      case 'C':
        current = HandleC(current);
        break;
      case 'D':
        current = HandleD(current);
        break;
      case 'F':
        Add("F");
        current = Skip(current, 'F');
        break;
      case 'G':
        current = HandleG(current);
        break;
      case 'H':
        current = HandleH(current);
        break;
      case 'J':
        current = HandleJ(current);
        break;
      case 'K':
        Add("K");
        current = Skip(current, 'K');
        break;
      case 'L':
        current = HandleL(current);
        break;
      case 'M':
        current = HandleM(current);
        break;
      case 'N':
        Add("N");
        current = Skip(current, 'N');
        break;
      case 'P':
        current = HandleP(current);
        break;
      case 'Q':
        Add("K");
        current = Skip(current, 'Q');
        break;
      case 'R':
        current = HandleR(current);
        break;
      case 'S':
        current = HandleS(current);
        break;
      case 'T':
        current = HandleT(current);
        break;
      case 'V':
        Add("F");
        current = Skip(current, 'V');
        break;
      case 'W':
        current = HandleW(current);
        break;
      case 'X':
        current = HandleX(current);
        break;
      case 'Z':
        current = HandleZ(current);
        break;
      default:
        ++current;
    }
  }

  if (primary_.size() > max_length) primary_.resize(max_length);
  if (secondary_.size() > max_length) secondary_.resize(max_length);
  return {primary_, secondary_};
}

ptrdiff_t Encoder::HandleC(ptrdiff_t current) {
  // Germanic "-ach-", e.g. "bacher", but not "macher" style exceptions.
  if (current > 1 && !IsVowel(current - 2) && Matches(current - 1, {"ACH"}) &&
      At(current + 2) != 'I' &&
      (At(current + 2) != 'E' || Matches(current - 2, {"BACHER", "MACHER"}))) {
    Add("K");
    return current + 2;
  }
  if (current == 0 && Matches(current, {"CAESAR"})) {
    Add("S");
    return current + 2;
  }
  // Italian "chianti".
  if (Matches(current, {"CHIA"})) {
    Add("K");
    return current + 2;
  }
  if (Matches(current, {"CH"})) {
    // "michael"
    if (current > 0 && Matches(current, {"CHAE"})) {
      Add("K", "X");
      return current + 2;
    }
    // Greek roots: "chemistry", "chorus".
    if (current == 0 &&
        (Matches(current + 1, {"HARAC", "HARIS"}) ||
         Matches(current + 1, {"HOR", "HYM", "HIA", "HEM"})) &&
        !Matches(0, {"CHORE"})) {
      Add("K");
      return current + 2;
    }
    // Germanic or greek "ch" as "kh": "architect", "orchestra", "wachtler".
    if (Matches(0, {"VAN ", "VON ", "SCH"}) ||
        Matches(current - 2, {"ORCHES", "ARCHIT", "ORCHID"}) ||
        Matches(current + 2, {"T", "S"}) ||
        ((Matches(current - 1, {"A", "O", "U", "E"}) || current == 0) &&
         Matches(current + 2, {"L", "R", "N", "M", "B", "H", "F", "V", "W", " "}))) {
      Add("K");
    } else if (current > 0) {
      if (Matches(0, {"MC"})) {
        Add("K");  // "mchugh"
      } else {
        Add("X", "K");
      }
    } else {
      Add("X");
    }
    return current + 2;
  }
  // "czerny"
  if (Matches(current, {"CZ"}) && !Matches(current - 2, {"WICZ"})) {
    Add("S", "X");
    return current + 2;
  }
  // "focaccia"
  if (Matches(current + 1, {"CIA"})) {
    Add("X");
    return current + 3;
  }
  // Double C, but not "mcclellan".
  if (Matches(current, {"CC"}) && !(current == 1 && At(0) == 'M')) {
    // "bellocchio" but not "bacchus".
    if (Matches(current + 2, {"I", "E", "H"}) && !Matches(current + 2, {"HU"})) {
      // "accident", "accede", "succeed".
      if ((current == 1 && At(current - 1) == 'A') ||
          Matches(current - 1, {"UCCEE", "UCCES"})) {
        Add("KS");
      } else {
        Add("X");  // "bacci", "bertucci"
      }
      return current + 3;
    }
    Add("K");
    return current + 2;
  }
  if (Matches(current, {"CK", "CG", "CQ"})) {
    Add("K");
    return current + 2;
  }
  if (Matches(current, {"CI", "CE", "CY"})) {
    if (Matches(current, {"CIO", "CIE", "CIA"})) {
      Add("S", "X");
    } else {
      Add("S");
    }
    return current + 2;
  }
  Add("K");
  // "mac caffrey", "mac gregor"
  if (Matches(current + 1, {" C", " Q", " G"})) return current + 3;
  if (Matches(current + 1, {"C", "K", "Q"}) && !Matches(current + 1, {"CE", "CI"})) {
    return current + 2;
  }
  return current + 1;
}

ptrdiff_t Encoder::HandleD(ptrdiff_t current) {
  if (Matches(current, {"DG"})) {
    if (Matches(current + 2, {"I", "E", "Y"})) {
      Add("J");  // "edge"
      return current + 3;
    }
    Add("TK");  // "edgar"
    return current + 2;
  }
  if (Matches(current, {"DT", "DD"})) {
    Add("T");
    return current + 2;
  }
  Add("T");
  return current + 1;
}

ptrdiff_t Encoder::HandleG(ptrdiff_t current) {
  if (At(current + 1) == 'H') {
    if (current > 0 && !IsVowel(current - 1)) {
      Add("K");
      return current + 2;
    }
    // "ghislane", "ghiradelli"
    if (current == 0) {
      Add(At(current + 2) == 'I' ? "J" : "K");
      return current + 2;
    }
    // Parker's rule: "hugh", "bough", "broughton".
    if ((current > 1 && Matches(current - 2, {"B", "H", "D"})) ||
        (current > 2 && Matches(current - 3, {"B", "H", "D"})) ||
        (current > 3 && Matches(current - 4, {"B", "H"}))) {
      return current + 2;
    }
    // "laugh", "mclaughlin", "cough", "rough", "tough".
    if (current > 2 && At(current - 1) == 'U' &&
        Matches(current - 3, {"C", "G", "L", "R", "T"})) {
      Add("F");
    } else if (current > 0 && At(current - 1) != 'I') {
      Add("K");
    }
    return current + 2;
  }

  if (At(current + 1) == 'N') {
    if (current == 1 && IsVowel(0) && !slavo_germanic_) {
      Add("KN", "N");
    } else if (!Matches(current + 2, {"EY"}) && At(current + 1) != 'Y' &&
               !slavo_germanic_) {
      // Not "cagney".
      Add("N", "KN");
    } else {
      Add("KN");
    }
    return current + 2;
  }

  // "tagliaro"
  if (Matches(current + 1, {"LI"}) && !slavo_germanic_) {
    Add("KL", "L");
    return current + 2;
  }

  // -ges-, -gep-, -gel-, -gie- at the beginning.
  if (current == 0 &&
      (At(current + 1) == 'Y' ||
       Matches(current + 1,
               {"ES", "EP", "EB", "EL", "EY", "IB", "IL", "IN", "IE", "EI", "ER"}))) {
    Add("K", "J");
    return current + 2;
  }

  // -ger-, -gy-
  if ((Matches(current + 1, {"ER"}) || At(current + 1) == 'Y') &&
      !Matches(0, {"DANGER", "RANGER", "MANGER"}) &&
      !Matches(current - 1, {"E", "I"}) && !Matches(current - 1, {"RGY", "OGY"})) {
    Add("K", "J");
    return current + 2;
  }

  // Italian, e.g. "biaggi".
  if (Matches(current + 1, {"E", "I", "Y"}) || Matches(current - 1, {"AGGI", "OGGI"})) {
    if (Matches(0, {"VAN ", "VON ", "SCH"}) || Matches(current + 1, {"ET"})) {
      Add("K");  // obviously germanic
    } else if (Matches(current + 1, {"IER "})) {
      Add("J");  // french ending
    } else {
      Add("J", "K");
    }
    return current + 2;
  }

  Add("K");
  return Skip(current, 'G');
}

ptrdiff_t Encoder::HandleH(ptrdiff_t current) {
  // Kept only when initial or between vowels.
  if ((current == 0 || IsVowel(current - 1)) && IsVowel(current + 1)) {
    Add("H");
    return current + 2;
  }
  return current + 1;
}

ptrdiff_t Encoder::HandleJ(ptrdiff_t current) {
  // Spanish: "jose", "san jacinto".
  if (Matches(current, {"JOSE"}) || Matches(0, {"SAN "})) {
    if ((current == 0 && At(current + 4) == ' ') || Matches(0, {"SAN "})) {
      Add("H");
    } else {
      Add("J", "H");
    }
    return current + 1;
  }

  if (current == 0 && !Matches(current, {"JOSE"})) {
    Add("J", "A");  // Yankelovich / Jankelowicz
  } else if (IsVowel(current - 1) && !slavo_germanic_ &&
             (At(current + 1) == 'A' || At(current + 1) == 'O')) {
    Add("J", "H");  // spanish "bajador"
  } else if (current == last_) {
    Add("J", "");
  } else if (!Matches(current + 1, {"L", "T", "K", "S", "N", "M", "B", "Z"}) &&
             !Matches(current - 1, {"S", "K", "L"})) {
    Add("J");
  }
  return Skip(current, 'J');
}

ptrdiff_t Encoder::HandleL(ptrdiff_t current) {
  if (At(current + 1) == 'L') {
    // Spanish: "cabrillo", "gallegos".
    if ((current == length_ - 3 && Matches(current - 1, {"ILLO", "ILLA", "ALLE"})) ||
        ((Matches(last_ - 1, {"AS", "OS"}) || Matches(last_, {"A", "O"})) &&
         Matches(current - 1, {"ALLE"}))) {
      Add("L", "");
      return current + 2;
    }
    Add("L");
    return current + 2;
  }
  Add("L");
  return current + 1;
}

ptrdiff_t Encoder::HandleM(ptrdiff_t current) {
  Add("M");
  // "dumb", "thumb", "dumber"
  if ((Matches(current - 1, {"UMB"}) &&
       (current + 1 == last_ || Matches(current + 2, {"ER"}))) ||
      At(current + 1) == 'M') {
    return current + 2;
  }
  return current + 1;
}

ptrdiff_t Encoder::HandleP(ptrdiff_t current) {
  if (At(current + 1) == 'H') {
    Add("F");
    return current + 2;
  }
  Add("P");
  // "campbell", "raspberry"
  return current + (Matches(current + 1, {"P", "B"}) ? 2 : 1);
}

ptrdiff_t Encoder::HandleR(ptrdiff_t current) {
  // French "rogier", but not "hochmeier".
  if (current == last_ && !slavo_germanic_ && Matches(current - 2, {"IE"}) &&
      !Matches(current - 4, {"ME", "MA"})) {
    Add("", "R");
  } else {
    Add("R");
  }
  return Skip(current, 'R');
}

ptrdiff_t Encoder::HandleS(ptrdiff_t current) {
  // "island", "isle", "carlisle", "carlysle"
  if (Matches(current - 1, {"ISL", "YSL"})) return current + 1;

  if (current == 0 && Matches(current, {"SUGAR"})) {
    Add("X", "S");
    return current + 1;
  }

  if (Matches(current, {"SH"})) {
    if (Matches(current + 1, {"HEIM", "HOEK", "HOLM", "HOLZ"})) {
      Add("S");  // germanic
    } else {
      Add("X");
    }
    return current + 2;
  }

  // Italian and armenian.
  if (Matches(current, {"SIO", "SIA"}) || Matches(current, {"SIAN"})) {
    if (!slavo_germanic_) {
      Add("S", "X");
    } else {
      Add("S");
    }
    return current + 3;
  }

  // "smith" matches "schmidt", "snider" matches "schneider"; slavic -sz-.
  if ((current == 0 && Matches(current + 1, {"M", "N", "L", "W"})) ||
      Matches(current + 1, {"Z"})) {
    Add("S", "X");
    return current + (Matches(current + 1, {"Z"}) ? 2 : 1);
  }

  if (Matches(current, {"SC"})) {
    // Schlesinger's rule.
    if (At(current + 2) == 'H') {
      // Dutch: "school", "schooner", "schermerhorn", "schenker".
      if (Matches(current + 3, {"OO", "ER", "EN", "UY", "ED", "EM"})) {
        if (Matches(current + 3, {"ER", "EN"})) {
          Add("X", "SK");
        } else {
          Add("SK");
        }
        return current + 3;
      }
      if (current == 0 && !IsVowel(3) && At(3) != 'W') {
        Add("X", "S");
      } else {
        Add("X");
      }
      return current + 3;
    }
    if (Matches(current + 2, {"I", "E", "Y"})) {
      Add("S");
      return current + 3;
    }
    Add("SK");
    return current + 3;
  }

  // French "resnais", "artois".
  if (current == last_ && Matches(current - 2, {"AI", "OI"})) {
    Add("", "S");
  } else {
    Add("S");
  }
  return current + (Matches(current + 1, {"S", "Z"}) ? 2 : 1);
}

ptrdiff_t Encoder::HandleT(ptrdiff_t current) {
  if (Matches(current, {"TION"})) {
    Add("X");
    return current + 3;
  }
  if (Matches(current, {"TIA", "TCH"})) {
    Add("X");
    return current + 3;
  }
  if (Matches(current, {"TH"}) || Matches(current, {"TTH"})) {
    // "thomas", "thames", or germanic.
    if (Matches(current + 2, {"OM", "AM"}) || Matches(0, {"VAN ", "VON ", "SCH"})) {
      Add("T");
    } else {
      Add("0", "T");
    }
    return current + 2;
  }
  Add("T");
  return current + (Matches(current + 1, {"T", "D"}) ? 2 : 1);
}

ptrdiff_t Encoder::HandleW(ptrdiff_t current) {
  if (Matches(current, {"WR"})) {
    Add("R");
    return current + 2;
  }
  if (current == 0 && (IsVowel(current + 1) || Matches(current, {"WH"}))) {
    // "wasserman" should match "vasserman"; "uomo" should match "womo".
    if (IsVowel(current + 1)) {
      Add("A", "F");
    } else {
      Add("A");
    }
  }
  // "arnow" should match "arnoff".
  if ((current == last_ && IsVowel(current - 1)) ||
      Matches(current - 1, {"EWSKI", "EWSKY", "OWSKI", "OWSKY"}) ||
      Matches(0, {"SCH"})) {
    Add("", "F");
    return current + 1;
  }
  // Polish "filipowicz".
  if (Matches(current, {"WICZ", "WITZ"})) {
    Add("TS", "FX");
    return current + 4;
  }
  return current + 1;
}

ptrdiff_t Encoder::HandleX(ptrdiff_t current) {
  // French "breaux".
  if (!(current == last_ &&
        (Matches(current - 3, {"IAU", "EAU"}) || Matches(current - 2, {"AU", "OU"})))) {
    Add("KS");
  }
  return current + (Matches(current + 1, {"C", "X"}) ? 2 : 1);
}

ptrdiff_t Encoder::HandleZ(ptrdiff_t current) {
  // Pinyin "zhao".
  if (At(current + 1) == 'H') {
    Add("J");
    return current + 2;
  }
  if (Matches(current + 1, {"ZO", "ZI", "ZA"}) ||
      (slavo_germanic_ && current > 0 && At(current - 1) != 'T')) {
    Add("S", "TS");
  } else {
    Add("S");
  }
  return Skip(current, 'Z');
}

}  // namespace

std::ostream& operator<<(std::ostream& os, const PhoneticCode& code) {
  return os << code.primary << '/' << code.secondary;
}

PhoneticCode DoubleMetaphone(std::string_view word, size_t max_code_length) {
  std::string letters;
  letters.reserve(word.size());
  for (char c : word) {
    if (c >= 'a' && c <= 'z') {
      letters.push_back(static_cast<char>(c - 'a' + 'A'));
    } else if (c >= 'A' && c <= 'Z') {
      letters.push_back(c);
    }
  }
  if (letters.empty()) return {};
  return Encoder(std::move(letters)).Run(max_code_length);
}

double PhoneticSimilarity(std::string_view a, std::string_view b) {
  const std::string code_a = DoubleMetaphone(a).primary;
  const std::string code_b = DoubleMetaphone(b).primary;
  return EditSimilarity(std::string_view(code_a), std::string_view(code_b));
}

}  // namespace lexnorm
