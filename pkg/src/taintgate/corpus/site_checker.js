// Strength widget: renders a verdict into the page (allowed, the page is
// where the password lives) and beacons usage stats home (not allowed,
// they derive from the password).
var pw = document.getElementById("passwordPwd");
pw.addEventListener("keypress", function (e) {
  var len = strlen(pw.value);
  var verdict = "weak";
  if (len > 4) {
    verdict = "strong";
  }
  document.getElementById("complexity").innerText = verdict;
  document.getElementById("scorebar").innerText = len;
  sendRequest("http://widgets.example/beacon.gif?len=" + len + "&v=" + verdict);
});
